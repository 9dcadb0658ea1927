#pragma once

#include <exception>
#include <utility>

#if defined(SEMIMT_HAVE_OPENMP)
#include <omp.h>
#endif

namespace semimt::par {

// Process-wide worker count for the batch kernels. 1 = serial reference path.
int threads();
void set_threads(int n);
bool openmp_built();

// Runs body(i) for i in [0, n). With threads() > 1 and OpenMP built in, items
// fan out across a static schedule; results must be written to item-indexed
// slots so the caller's reduction order is independent of the thread count.
template <class F>
void for_each_item(int n, F&& body) {
    if (n <= 0) return;
#if defined(SEMIMT_HAVE_OPENMP)
    if (threads() > 1) {
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static) num_threads(threads())
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
#pragma omp critical(semimt_par_error)
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#endif
    for (int i = 0; i < n; ++i) body(i);
}

// Serial reference path, kept callable regardless of the thread setting so
// tests can compare it against the parallel kernels.
template <class F>
void for_each_item_serial(int n, F&& body) {
    for (int i = 0; i < n; ++i) body(i);
}

}  // namespace semimt::par
