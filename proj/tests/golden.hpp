#pragma once

// Frozen outputs of oracles/gen_golden.py (mpmath, 40 digits). Regenerate
// only when a model definition changes.

namespace golden {

inline constexpr double kSchwPotentialTail = 0.66666666666666666667;
inline constexpr double kMollifiedW0 = 1.75;
inline constexpr double kMollifiedW1 = 1.5;
inline constexpr double kMollifiedF2 = 3.125;
inline constexpr double kMollifiedRHalf = 0.87692477204012821325;
inline constexpr double kSchwAreaR1 = 63.617251235193313079;
inline constexpr double kSchwMeanCurvR1 = 0.2962962962962962963;
inline constexpr double kMollifiedFhatT1 = -7.0391352295939865343;
inline constexpr double kMollifiedFhatT5p5 = -0.39653460991967337646;
inline constexpr double kMollifiedFhatT50p5 = -4.903111796428798504e-3;
inline constexpr double kMollifiedVolT100 = 4.3177354722159456737e+6;
inline constexpr double kMollifiedVolT1 = 15.923530520719281127;
inline constexpr double kMollifiedLevelRT1 = 0.53527275335228226168;
inline constexpr double kSchwVolT2 = 240.51485497058837651;
inline constexpr double kPlummerBoundaryR = 0.43204080033309578939;
inline constexpr double kPlummerCapacity = 1.0999549438999479894;
inline constexpr double kPlummerBoundaryArea = 76.123708103767430391;
inline constexpr double kPlummerBoundaryGrad2 = 2.5098605065602768119;
inline constexpr double kPlummerDeficit = 1.3897537966912908717;
inline constexpr double kPlummerA1At2C = 10.72806215050539201;

}  // namespace golden
