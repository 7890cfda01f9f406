#pragma once

#include <string>

namespace curvlab {

/// Shortest decimal string that parses back to the same double
/// (`nan`, `inf`, `-inf` for non-finite values).
std::string format_double(double value);

}  // namespace curvlab
