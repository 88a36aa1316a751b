#include "magiso/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magiso {

int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("MAGISO_THREADS")) {
      try {
        const int n = std::stoi(env);
        if (n >= 1) return n;
      } catch (...) {
      }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }();
  return cached;
}

}  // namespace magiso
