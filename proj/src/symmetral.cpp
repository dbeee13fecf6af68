#include "geotom/symmetral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace geotom {

RevolutionProfile::RevolutionProfile(Direction ax, std::vector<double> zs, std::vector<double> rs)
    : axis(std::move(ax)), z(std::move(zs)), r(std::move(rs)) {
  const std::size_t n = z.size();
  require(n >= 5 && n % 2 == 1, errc::invalid_parameter,
          "RevolutionProfile: need an odd number (>= 5) of heights");
  require(r.size() == n, errc::invalid_parameter, "RevolutionProfile: z/r size mismatch");
  require(std::is_sorted(z.begin(), z.end()), errc::invalid_parameter,
          "RevolutionProfile: heights must be sorted");
  require(std::abs(z.front() + z.back()) <= 1e-12 * std::max(1.0, std::abs(z.back())),
          errc::invalid_parameter, "RevolutionProfile: heights must span [-z_max, z_max]");
  double rmax = 0.0;
  for (double v : r) {
    require(v >= 0.0 && std::isfinite(v), errc::invalid_parameter,
            "RevolutionProfile: radii must be >= 0");
    rmax = std::max(rmax, v);
  }
  const double tol = 1e-9 * std::max(1.0, rmax);
  require(r.front() <= tol && r.back() <= tol, errc::invalid_parameter,
          "RevolutionProfile: r(±z_max) must vanish");
  for (std::size_t k = 0; k < n; ++k)
    require(std::abs(r[k] - r[n - 1 - k]) <= tol, errc::invalid_parameter,
            "RevolutionProfile: radii must be even in z");

  // Interpolate r²(z) (the slice area up to π), which stays smooth through
  // the caps where r itself behaves like √(z_max − |z|); r(z) is recovered by
  // square root, so the interpolant is still monotone, C¹ where r > 0, and
  // has the correct √ cap behavior.
  std::vector<double> r2(n);
  for (std::size_t k = 0; k < n; ++k) r2[k] = r[k] * r[k];
  interp_ = Pchip(z, std::move(r2));

  // Volume by Fubini: π ∫ r² dz. On a Chebyshev–Lobatto height grid this is
  // Clenshaw–Curtis on the measured slice areas (spectral for smooth bodies);
  // otherwise integrate the interpolant piecewise (Gauss, exact per cubic).
  const double zmax = z.back();
  bool lobatto = true;
  for (std::size_t k = 0; k < n && lobatto; ++k) {
    const double ref = -zmax * std::cos(kPi * static_cast<double>(k) / (n - 1));
    if (std::abs(z[k] - ref) > 1e-10 * std::max(1.0, zmax)) lobatto = false;
  }
  if (lobatto) {
    const auto w = clenshaw_curtis_weights(static_cast<int>(n));
    std::vector<double> vals(n);
    for (std::size_t k = 0; k < n; ++k) vals[k] = w[k] * r[k] * r[k];
    volume = kPi * zmax * pairwise_sum(vals);
  } else {
    const auto gl = gauss_legendre(4);
    std::vector<double> vals;
    vals.reserve((n - 1) * 4);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double half = 0.5 * (z[k + 1] - z[k]);
      const double mid = 0.5 * (z[k + 1] + z[k]);
      for (int q = 0; q < 4; ++q) {
        const double zz = mid + half * gl.nodes[static_cast<std::size_t>(q)];
        const double rr = interp_(zz);
        vals.push_back(gl.weights[static_cast<std::size_t>(q)] * half * rr * rr);
      }
    }
    volume = kPi * pairwise_sum(vals);
  }
}

double RevolutionProfile::radius_at(double zq) const {
  if (zq <= z.front() || zq >= z.back()) return 0.0;
  return std::sqrt(std::max(0.0, interp_(zq)));
}

double RevolutionProfile::radius_deriv(double zq) const {
  if (zq <= z.front() || zq >= z.back()) return 0.0;
  const double r = radius_at(zq);
  return interp_.derivative(zq) / (2.0 * std::max(r, 1e-12));
}

std::string RevolutionProfile::to_csv() const {
  std::string out = "z,r\n";
  char buf[64];
  for (std::size_t k = 0; k < z.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z[k], r[k]);
    out += buf;
  }
  return out;
}

namespace {

// Polar-ray slice area about a star point of the slice. K must be convex and
// the star point must lie in the slice plane.
double slice_area_at_point(const BodyDescriptor& K, std::span<const double> p,
                           const Direction& axis, const SliceParams& params) {
  if (!contains(K, p)) return 0.0;
  const auto basis = orthonormal_basis(axis);
  const auto d1 = basis[0].coords();
  const auto d2 = basis[1].coords();
  const double scale = circumradius_bound(K);
  const double hi0 = 2.0 * scale + norm2(p) + 1.0;
  const int m = params.psi_nodes;
  std::vector<double> vals(static_cast<std::size_t>(m));
  for_each_index(Exec::parallel, vals.size(), [&](std::size_t k) {
    const double psi = kTwoPi * static_cast<double>(k) / m;
    const double c = std::cos(psi), s = std::sin(psi);
    std::array<double, 3> x{};
    auto at = [&](double t) {
      for (int i = 0; i < 3; ++i)
        x[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] +
                                         t * (c * d1[static_cast<std::size_t>(i)] +
                                              s * d2[static_cast<std::size_t>(i)]);
      return std::span<const double>(x);
    };
    double lo = 0.0, hi = hi0;
    const double tol = params.bisect_rel_tol * scale;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (contains(K, at(mid)))
        lo = mid;
      else
        hi = mid;
    }
    const double r = 0.5 * (lo + hi);
    vals[k] = r * r;
  });
  return 0.5 * pairwise_sum(vals) * (kTwoPi / m);
}

std::vector<double> slice_star_point(const BodyDescriptor& K, const Direction& axis, double z,
                                     double extent, const std::vector<double>& top) {
  std::vector<double> p(3);
  for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = z * axis[static_cast<std::size_t>(i)];
  if (contains(K, p)) return p;
  // Axis point is outside: slide along the chord through the top point, which
  // stays inside a centered convex body at every height.
  const double c = z / extent;
  for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = c * top[static_cast<std::size_t>(i)];
  return p;
}

void require_convex(const BodyDescriptor& K, const SliceParams& params) {
  const auto probe = convexity_probe(K, params.probe_trials, params.probe_seed);
  require(probe.pass, errc::unsupported_body,
          "slice_area: convexity probe failed (slices of nonconvex bodies may not be "
          "star-shaped about the axis)");
}

}  // namespace

double slice_area(const BodyDescriptor& K, const Direction& axis, double z,
                  const SliceParams& params) {
  require(K.dim() == 3 && axis.dim() == 3, errc::invalid_parameter, "slice_area: E³ only");
  require_convex(K, params);
  const double h = extent_along(K, axis);
  if (std::abs(z) >= h) return 0.0;
  const auto top = top_point(K, axis);
  const double hp = dot(top, axis.coords());
  const auto p = slice_star_point(K, axis, z, hp, top);
  return slice_area_at_point(K, p, axis, params);
}

RevolutionProfile schwarz_symmetral(const BodyDescriptor& K, const Direction& axis, int grid_size,
                                    const SliceParams& params) {
  require(K.dim() == 3 && axis.dim() == 3, errc::invalid_parameter, "schwarz_symmetral: E³ only");
  require(grid_size >= 33, errc::invalid_parameter, "schwarz_symmetral: grid_size >= 33 required");
  if (grid_size % 2 == 0) ++grid_size;  // odd grid keeps z = 0 as a knot
  require_convex(K, params);

  const double h = extent_along(K, axis);
  const auto top = top_point(K, axis);
  const double hp = dot(top, axis.coords());
  const int G = grid_size;
  const int mid = (G - 1) / 2;

  std::vector<double> z(static_cast<std::size_t>(G)), r(static_cast<std::size_t>(G), 0.0);
  for (int k = 0; k <= mid; ++k) {
    const double zk = h * std::cos(kPi * static_cast<double>(k) / (G - 1));
    z[static_cast<std::size_t>(G - 1 - k)] = zk;
    z[static_cast<std::size_t>(k)] = -zk;
  }
  z[static_cast<std::size_t>(mid)] = 0.0;

  // Slice areas on the nonnegative half; mirror (the body is centered, so the
  // symmetral is exactly even by construction).
  std::vector<double> area(static_cast<std::size_t>(mid) + 1, 0.0);
  for_each_index(Exec::parallel, area.size(), [&](std::size_t i) {
    const double zk = z[static_cast<std::size_t>(mid) + i];
    if (std::abs(zk) >= h) return;
    const auto p = slice_star_point(K, axis, zk, hp, top);
    area[i] = slice_area_at_point(K, p, axis, params);
  });
  for (int k = 0; k <= mid; ++k) {
    const double rk = std::sqrt(std::max(0.0, area[static_cast<std::size_t>(k)]) / kPi);
    r[static_cast<std::size_t>(mid + k)] = rk;
    r[static_cast<std::size_t>(mid - k)] = rk;
  }
  r.front() = 0.0;
  r.back() = 0.0;
  return RevolutionProfile(axis, std::move(z), std::move(r));
}

double revolution_radial(const RevolutionProfile& profile, const Direction& u) {
  require(u.dim() == 3, errc::invalid_parameter, "revolution_radial: E³ only");
  const double cz = std::clamp(dot(u.coords(), profile.axis.coords()), -1.0, 1.0);
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  const double zmax = profile.z_max();
  if (sz < 1e-12) return zmax;
  double rmax = 0.0;
  for (double v : profile.r) rmax = std::max(rmax, v);
  double lo = 0.0, hi = std::sqrt(zmax * zmax + rmax * rmax) * (1.0 + 1e-9) + 1e-12;
  // f(c) = c sin φ − r(c cos φ) changes sign exactly once for a convex profile.
  const double tol = 1e-12 * hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid * sz - profile.radius_at(mid * cz) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BodyDescriptor profile_to_body(const RevolutionProfile& profile, int samples) {
  require(samples >= 9, errc::invalid_parameter, "profile_to_body: samples >= 9 required");
  Revolution rev;
  rev.smoothness = Smoothness::c1;
  rev.profile.resize(static_cast<std::size_t>(samples));
  const auto basis = orthonormal_basis(profile.axis);
  for_each_index(Exec::parallel, rev.profile.size(), [&](std::size_t i) {
    const double phi = 0.5 * kPi * static_cast<double>(i) / (samples - 1);
    std::vector<double> v(3);
    for (int k = 0; k < 3; ++k)
      v[static_cast<std::size_t>(k)] = std::cos(phi) * profile.axis[static_cast<std::size_t>(k)] +
                                       std::sin(phi) * basis[0][static_cast<std::size_t>(k)];
    rev.profile[i] = revolution_radial(profile, Direction(std::move(v)));
  });
  return BodyDescriptor(std::move(rev));
}

InvarianceGap symmetral_invariance_gap(const BodyDescriptor& K, const Direction& u0, int grid_size,
                                       const Eq1Params& eq1, const SliceParams& slice) {
  InvarianceGap out;
  out.g_body = funk_invert_eq1(K, u0, eq1);
  const auto profile = schwarz_symmetral(K, u0, grid_size, slice);
  const auto bar = profile_to_body(profile);
  out.g_symmetral = funk_invert_eq1(bar, Direction::axis(3, 2), eq1);
  out.gap = std::abs(out.g_body - out.g_symmetral);
  return out;
}

}  // namespace geotom
