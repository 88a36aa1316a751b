#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace magiso {

// Execution policy for the data-parallel kernels. Every kernel keeps a plain
// serial loop next to its OpenMP loop; the serial path is the reference the
// tests compare against, and the benchmark tool times both.
enum class Exec { Serial, Parallel };

// Thread cap: MAGISO_THREADS if set (>=1), otherwise the OpenMP default.
int max_threads();

// parallel_for(n, f) runs f(i) for i in [0, n). Results must go to
// disjoint slots so the outcome is independent of scheduling.
template <typename F>
void parallel_for_each(Exec exec, std::size_t n, F&& f);

// Deterministic sum of f(i) over [0, n): partial sums are accumulated per
// fixed-size block and combined in block order, so the result is identical
// for any thread count (including the serial path).
template <typename F>
double deterministic_sum(Exec exec, std::size_t n, F&& f);

namespace detail {
constexpr std::size_t kReductionBlock = 2048;
}

}  // namespace magiso

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magiso {

template <typename F>
void parallel_for_each(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
#ifdef _OPENMP
  const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

template <typename F>
double deterministic_sum(Exec exec, std::size_t n, F&& f) {
  const std::size_t nblocks =
      (n + detail::kReductionBlock - 1) / detail::kReductionBlock;
  if (nblocks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(i);
    return s;
  }
  // Both execution policies use the same block association, so the serial
  // reference and any thread count produce bit-identical sums.
  std::vector<double> partial(nblocks, 0.0);
  parallel_for_each(exec, nblocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kReductionBlock;
    const std::size_t hi = std::min(n, lo + detail::kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace magiso
