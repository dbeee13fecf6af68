#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geotom/sphere_quad.hpp"

#include <nlohmann/json_fwd.hpp>

namespace geotom {

enum class Smoothness { c0, c1, cinf };

struct HarmCoeff {
  int l = 0;
  int m = 0;
  double c = 0.0;
  bool operator==(const HarmCoeff&) const = default;
};

struct Ball {
  int n = 3;
  double r = 1.0;
  bool operator==(const Ball&) const = default;
};

struct Ellipsoid {
  std::vector<double> semi_axes;
  bool operator==(const Ellipsoid&) const = default;
};

struct Box {
  std::vector<double> half_sides;
  bool operator==(const Box&) const = default;
};

struct CrossPolytope {
  int n = 3;
  double a = 1.0;
  bool operator==(const CrossPolytope&) const = default;
};

/// B^{n-1}(r) × [-h, h]; the axis is the last coordinate.
struct Cylinder {
  int n = 3;
  double r = 1.0;
  double half_height = 1.0;
  bool operator==(const Cylinder&) const = default;
};

/// Body of revolution about the z-axis in R³: ρ(φ) sampled uniformly on
/// [0, π/2] (even extension across the equator), C¹ Hermite interpolation.
struct Revolution {
  std::vector<double> profile;  // >= 4 samples, all > 0
  Smoothness smoothness = Smoothness::c1;
  bool operator==(const Revolution&) const = default;
};

/// ρ(u) = r0 + amplitude · Σ c_lm Y_lm(u), even degrees only.
struct PerturbedBall {
  double r0 = 1.0;
  std::vector<HarmCoeff> coeffs;
  double amplitude = 1.0;
  bool operator==(const PerturbedBall&) const = default;
};

/// Radial samples on the uniform (φ, θ) grid: φ_i = iπ/(n_phi-1) including
/// both poles, θ_j = 2πj/n_theta (n_theta even). Row-major values[i*n_theta+j].
/// order 1 = bilinear, order 3 = bicubic with even extension across the poles.
struct Sampled {
  int n_phi = 0;
  int n_theta = 0;
  int order = 3;
  std::vector<double> values;
  bool operator==(const Sampled&) const = default;
};

using BodyVariant =
    std::variant<Ball, Ellipsoid, Box, CrossPolytope, Cylinder, Revolution, PerturbedBall, Sampled>;

/// Closed description of a centered star body. Construction validates the
/// variant invariants (positive sizes, evenness, perturbed radial >= 0.1 r0).
class BodyDescriptor {
public:
  explicit BodyDescriptor(BodyVariant v);

  int dim() const { return dim_; }
  Smoothness smoothness() const { return smoothness_; }
  const BodyVariant& v() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  bool operator==(const BodyDescriptor& o) const { return v_ == o.v_; }

private:
  BodyVariant v_;
  int dim_ = 0;
  Smoothness smoothness_ = Smoothness::c0;
};

/// North pole u0 plus an orthonormal frame of u0⊥ defining (θ, φ):
/// dir(θ, φ) = cos φ · u0 + sin φ (cos θ · t1 + sin θ · t2). S² only.
struct PoleFrame {
  Direction pole;
  Direction t1, t2;

  static PoleFrame standard(const Direction& pole);
  std::array<double, 3> direction(double theta, double phi) const;
};

/// Radial function ρ_K(u) = max{c >= 0 : c·u ∈ K}; u must be unit.
double radial(const BodyDescriptor& K, std::span<const double> u);
double radial(const BodyDescriptor& K, const Direction& u);

/// ‖x‖ <= ρ_K(x/‖x‖); the origin is always contained.
bool contains(const BodyDescriptor& K, std::span<const double> x);

/// ∂ρ_K/∂φ at frame coordinates (θ, φ). Analytic for ball, ellipsoid and
/// revolution bodies; central difference (δ = 1e-5 rad) otherwise. Rejects
/// non-smooth variants (box, cross-polytope, cylinder, order-1 sampled).
double radial_dphi(const BodyDescriptor& K, const PoleFrame& frame, double theta, double phi);

struct ConvexityReport {
  bool pass = true;
  std::vector<double> p, q;  // witness boundary pair on failure
};

/// Midpoint-containment sampling check of convexity.
ConvexityReport convexity_probe(const BodyDescriptor& K, int trials, std::uint64_t seed);

/// JSON body schema (see schemas/body.schema.json). Unknown fields rejected;
/// errors carry the JSON path.
BodyDescriptor parse_descriptor(const std::string& text);
std::string serialize(const BodyDescriptor& K);

nlohmann::json body_to_json(const BodyDescriptor& K);
BodyDescriptor body_from_json(const nlohmann::json& j);

/// Uniform upper bound for ρ_K (bisection bracket).
double circumradius_bound(const BodyDescriptor& K);

/// Support function h_K(axis) = max_{x ∈ K} <x, axis>: closed form where the
/// variant allows, else deterministic ascent over ρ(u)·<u, axis>.
double extent_along(const BodyDescriptor& K, const Direction& axis);

/// Boundary point attaining extent_along (the "top point" in direction axis).
std::vector<double> top_point(const BodyDescriptor& K, const Direction& axis);

/// Uniform scaling s·K (s > 0) as a new descriptor.
BodyDescriptor scaled(const BodyDescriptor& K, double s);

bool smooth_gate(const BodyDescriptor& K);  // true iff smoothness >= C¹

}  // namespace geotom
