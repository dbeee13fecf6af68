#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "geotom/numeric.hpp"
#include "geotom/parallel.hpp"

namespace geotom {

/// Unit vector in R^n, n >= 2. The constructor normalizes; a zero or
/// non-finite input is rejected.
class Direction {
public:
  explicit Direction(std::vector<double> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  Direction operator-() const;

  static Direction axis(int n, int i);  // e_i in R^n

private:
  std::vector<double> coords_;
};

enum class SphereDomain { full_sphere, subsphere };

/// Nodes + positive weights on S^{n-1} or on S^{n-1} ∩ u⊥. Immutable after
/// construction; weights sum to the exact surface measure of the domain.
class QuadratureRule {
public:
  QuadratureRule(int dim, SphereDomain domain, std::vector<double> nodes,
                 std::vector<double> weights, std::optional<Direction> axis = std::nullopt);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  SphereDomain domain() const { return domain_; }
  const std::optional<Direction>& axis() const { return axis_; }

  std::span<const double> node(std::size_t i) const {
    return {nodes_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  double weight_sum() const;

  /// sum_i w_i f(node_i), node evaluations in parallel, reduction in fixed
  /// order (thread-count independent).
  template <class F>
  double integrate(F&& f, Exec exec = Exec::parallel) const {
    std::vector<double> vals(size());
    for_each_index(exec, size(), [&](std::size_t i) { vals[i] = f(node(i)); });
    return pairwise_dot(weights_, vals);
  }

private:
  int dim_;
  SphereDomain domain_;
  std::vector<double> nodes_;  // size() * dim_, row-major
  std::vector<double> weights_;
  std::optional<Direction> axis_;
};

/// n-1 unit vectors spanning u⊥, completed by the Householder reflection
/// that maps e_1 to u. Deterministic, stable near u = ±e_1.
std::vector<Direction> orthonormal_basis(const Direction& u);

/// Equally spaced nodes on the great circle S² ∩ u⊥ with weights 2π/m
/// (periodic trapezoid: exact for trig polynomials of degree < m). m >= 4.
QuadratureRule great_circle_rule(const Direction& u, int m);

/// Seeded Monte Carlo rule on S^{n-1} ∩ u⊥ for n > 3: n_samples uniform
/// nodes on the embedded (n-2)-sphere, each weighted |S^{n-2}| / n_samples.
QuadratureRule subsphere_rule(const Direction& u, std::size_t n_samples, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSphereSeed = 0x5eed5eedULL;

/// Full-sphere rule. n = 3: Gauss–Legendre(resolution) in cos φ × uniform
/// (2·resolution) in θ, weight sum exactly 4π. n > 3: seeded Monte Carlo
/// with `resolution` samples, weight sum exactly |S^{n-1}|.
QuadratureRule sphere_rule(int n, int resolution, std::uint64_t seed = kDefaultSphereSeed);

// --- real spherical harmonics on S² ---------------------------------------
//
// Real orthonormal basis, no Condon–Shortley phase:
//   Y_{l,0}  = Pbar_{l,0}(cos φ)
//   Y_{l,m}  = √2 · Pbar_{l,m}(cos φ) · cos(mθ)   (m > 0)
//   Y_{l,-m} = √2 · Pbar_{l,m}(cos φ) · sin(mθ)   (m > 0)
// with Pbar the fully normalized associated Legendre functions
// (∫_{S²} Y² = 1). φ ∈ [0, π] is the polar angle, θ the azimuth.

double sph_harm(int l, int m, double theta, double phi);

/// Same, from a unit vector (world frame: φ from +z, θ = atan2(y, x)).
double sph_harm_dir(int l, int m, std::span<const double> u);

/// All Pbar_{l,m}(x), 0 <= m <= l <= max_degree, flat index l*(l+1)/2 + m.
std::vector<double> legendre_bar_table(int max_degree, double x);

/// Real spherical-harmonic coefficients of a function on S², 0 <= l <= L.
struct HarmonicSpectrum {
  int max_degree = 0;
  std::vector<double> coeffs;  // flat index l*(l+1) + m, size (L+1)^2

  explicit HarmonicSpectrum(int L = 0)
      : max_degree(L), coeffs(static_cast<std::size_t>((L + 1) * (L + 1)), 0.0) {}

  double& at(int l, int m) { return coeffs[static_cast<std::size_t>(l * (l + 1) + m)]; }
  double at(int l, int m) const { return coeffs[static_cast<std::size_t>(l * (l + 1) + m)]; }

  /// Max |coeff| over odd degrees (evenness diagnostic).
  double odd_degree_energy() const;
  double max_abs() const;
};

/// Samples of a function at the sphere_rule(3, resolution) nodes, stored as
/// values[i * 2*resolution + j]: i indexes the Gauss–Legendre latitudes
/// (x = cos φ ascending), j the uniform azimuths θ_j = 2πj / (2·resolution).
struct SphereGrid {
  int resolution = 0;
  std::vector<double> values;

  int n_phi() const { return resolution; }
  int n_theta() const { return 2 * resolution; }
};

SphereGrid sample_sphere(int resolution,
                         const std::function<double(std::span<const double>)>& f,
                         Exec exec = Exec::parallel);

/// Forward harmonic analysis of a sampled grid. Requires L <= resolution/2.
HarmonicSpectrum analyze(const SphereGrid& grid, int max_degree);

/// Pointwise synthesis at a unit vector.
double synthesize(const HarmonicSpectrum& spec, std::span<const double> u);

/// Synthesis onto the standard grid (inverse of analyze for band-limited data).
SphereGrid synthesize_grid(const HarmonicSpectrum& spec, int resolution);

/// Unit vectors of the standard grid in row-major (i, j) order.
std::vector<Direction> sphere_grid_directions(int resolution);

}  // namespace geotom
