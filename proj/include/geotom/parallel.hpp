#pragma once

#include <cstddef>
#include <cstdlib>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geotom {

/// Execution policy for node-parallel kernels. Results are required to be
/// bit-identical between the two: the parallel path only distributes
/// independent per-index evaluations, and every reduction runs serially in
/// a fixed order afterwards, so thread count never changes an answer.
enum class Exec { serial, parallel };

/// Thread cap. GEOTOM_THREADS (if set and > 0) wins over the OpenMP default.
inline int max_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("GEOTOM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// fn(i) for i in [0, n), independent iterations.
template <class F>
void for_each_index(Exec exec, std::size_t n, F&& fn) {
#ifdef _OPENMP
  if (exec == Exec::parallel && n > 1) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

namespace detail {
inline double pairwise_sum_impl(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum_impl(v, h) + pairwise_sum_impl(v + h, n - h);
}

inline double pairwise_dot_impl(const double* a, const double* b, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_dot_impl(a, b, h) + pairwise_dot_impl(a + h, b + h, n - h);
}
}  // namespace detail

/// Fixed-order pairwise reduction; independent of thread count by construction.
inline double pairwise_sum(std::span<const double> v) {
  return detail::pairwise_sum_impl(v.data(), v.size());
}

inline double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  return detail::pairwise_dot_impl(a.data(), b.data(), a.size());
}

/// Evaluate fn over [0, n) into a buffer (possibly in parallel), then reduce
/// serially in fixed order. The canonical kernel shape for every quadrature
/// sum in this library.
template <class F>
double map_reduce(Exec exec, std::size_t n, F&& fn) {
  std::vector<double> buf(n);
  for_each_index(exec, n, [&](std::size_t i) { buf[i] = fn(i); });
  return pairwise_sum(buf);
}

}  // namespace geotom
