#include "semimt/parallel.hpp"

namespace semimt::par {

namespace {
int g_threads = 1;
}

int threads() { return g_threads; }

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }

bool openmp_built() {
#if defined(SEMIMT_HAVE_OPENMP)
    return true;
#else
    return false;
#endif
}

}  // namespace semimt::par
