#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geotom/radon.hpp"
#include "geotom/star_body.hpp"

namespace geotom {

/// Schwarz symmetral of a convex body: a body of revolution given by the
/// disk radius r(z) at each height z along the axis. Heights are
/// Chebyshev–Lobatto clustered (r behaves like √distance at the caps),
/// interpolation is monotone cubic (C¹).
struct RevolutionProfile {
  Direction axis;
  std::vector<double> z;  // ascending, z.front() = -z_max, z.back() = +z_max
  std::vector<double> r;  // >= 0, r at both ends = 0
  double volume = 0.0;    // π ∫ r² dz, Clenshaw–Curtis on the native grid

  double radius_at(double zq) const;     // 0 outside [z_min, z_max]
  double radius_deriv(double zq) const;  // dr/dz of the interpolant
  double z_max() const { return z.back(); }

  std::string to_csv() const;  // header z,r

  RevolutionProfile(Direction ax, std::vector<double> zs, std::vector<double> rs);

private:
  Pchip interp_;
};

struct SliceParams {
  int psi_nodes = 512;          // polar rays per slice
  double bisect_rel_tol = 1e-10;
  int probe_trials = 4096;      // convexity gate sample size
  std::uint64_t probe_seed = 0x511cEULL;
};

/// Area of the planar slice K ∩ {<x, axis> = z} of a convex body, by polar
/// ray bisection about a star point of the slice. Returns 0 beyond the
/// body's extent; throws unsupported-body when the convexity probe fails.
double slice_area(const BodyDescriptor& K, const Direction& axis, double z,
                  const SliceParams& params = {});

/// Schwarz symmetral about `axis`: r(z_k) = √(slice_area(K, axis, z_k)/π)
/// on a Lobatto grid of grid_size (>= 33, forced odd) heights.
RevolutionProfile schwarz_symmetral(const BodyDescriptor& K, const Direction& axis,
                                    int grid_size = 129, const SliceParams& params = {});

/// Radial function of the profile body: solves c·sin φ = r(c·cos φ).
double revolution_radial(const RevolutionProfile& profile, const Direction& u);

/// Resample the profile as a `revolution` BodyDescriptor about the z-axis
/// (the angular profile ρ(φ) on [0, π/2]).
BodyDescriptor profile_to_body(const RevolutionProfile& profile, int samples = 2049);

struct InvarianceGap {
  double gap = 0.0;
  double g_body = 0.0;       // g(u0) of K, Eq. (1) route
  double g_symmetral = 0.0;  // ḡ(u0) of the symmetral about u0
};

/// |g(u0) − ḡ(u0)| with the symmetral taken about the axis through u0;
/// both values from the Eq. (1) route.
InvarianceGap symmetral_invariance_gap(const BodyDescriptor& K, const Direction& u0,
                                       int grid_size = 129, const Eq1Params& eq1 = {},
                                       const SliceParams& slice = {});

}  // namespace geotom
