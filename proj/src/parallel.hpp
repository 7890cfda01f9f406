#pragma once

#include <cstddef>
#include <exception>
#include <limits>

namespace curvlab::detail {

/// Runs body(i) for i in [0, n) across OpenMP threads. If any call throws,
/// the exception from the smallest failing index is rethrown afterwards, so
/// the error reported does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
    std::exception_ptr error;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            body(i);
        } catch (...) {
#pragma omp critical(curvlab_parallel_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace curvlab::detail
