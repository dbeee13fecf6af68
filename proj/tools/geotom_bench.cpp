// Serial-vs-OpenMP benchmark for the node-parallel kernels. Both paths share
// the fixed-order reduction, so they must agree bit-for-bit; this tool prints
// wall times, speedup, and the max |serial - parallel| as a sanity column.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "geotom/bp_lab.hpp"
#include "geotom/radon.hpp"
#include "geotom/star_body.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using geotom::BodyDescriptor;
using geotom::Direction;
using geotom::Exec;

double time_ms(const std::function<double()>& fn, int reps, double* out) {
  using clock = std::chrono::steady_clock;
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    *out = fn();
    const auto t1 = clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, const std::function<double(Exec)>& kernel, int reps = 3) {
  double vs = 0.0, vp = 0.0;
  const double ts = time_ms([&] { return kernel(Exec::serial); }, reps, &vs);
  const double tp = time_ms([&] { return kernel(Exec::parallel); }, reps, &vp);
  std::printf("%-34s %10.2f %10.2f %7.2fx   %.3g\n", name, ts, tp, ts / tp,
              std::abs(vs - vp));
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP: %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("OpenMP: disabled at build time\n");
#endif
  std::printf("%-34s %10s %10s %8s   %s\n", "kernel", "serial ms", "omp ms", "speedup",
              "|serial-parallel|");

  const BodyDescriptor ellipsoid{geotom::Ellipsoid{{1.0, 2.0, 3.0}}};
  const BodyDescriptor cube10{geotom::Box{std::vector<double>(10, 0.5)}};

  row("volume(ellipsoid), res 256", [&](Exec e) {
    geotom::RadonParams p;
    p.sphere_resolution = 256;
    p.exec = e;
    return geotom::volume(ellipsoid, p);
  });

  row("section table, 512 dirs, m=512", [&](Exec e) {
    geotom::RadonParams p;
    p.circle_nodes = 512;
    p.exec = e;
    geotom::Rng rng(3);
    std::vector<Direction> dirs;
    for (int i = 0; i < 512; ++i) dirs.emplace_back(rng.unit_vector(3));
    const auto t = geotom::section_table(ellipsoid, dirs, p);
    return geotom::pairwise_sum(t.values);
  });

  row("cube10 section MC, N=2e5", [&](Exec e) {
    geotom::RadonParams p;
    p.exec = e;
    geotom::Rng rng(5);
    return geotom::section_volume(cube10, Direction(rng.unit_vector(10)), p);
  });

  row("Eq.(1) inversion, 64 poles", [&](Exec e) {
    geotom::Eq1Params p;
    p.exec = e;
    geotom::Rng rng(7);
    double acc = 0.0;
    for (int i = 0; i < 64; ++i)
      acc += geotom::funk_invert_eq1(ellipsoid, Direction(rng.unit_vector(3)), p);
    return acc;
  });

  return 0;
}
