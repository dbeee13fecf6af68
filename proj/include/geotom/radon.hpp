#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geotom/star_body.hpp"

#include <nlohmann/json_fwd.hpp>

namespace geotom {

/// Shared quadrature knobs for the forward operators.
struct RadonParams {
  int circle_nodes = 256;            // great-circle rule (n = 3)
  std::size_t mc_samples = 200000;   // subsphere Monte Carlo (n > 3)
  std::uint64_t seed = kDefaultSphereSeed;
  int sphere_resolution = 64;        // sphere_rule latitude count (n = 3)
  Exec exec = Exec::parallel;
};

struct SectionTable {
  std::vector<Direction> directions;
  std::vector<double> values;      // (n-1)-volumes, >= 0
  std::vector<double> mc_stderr;   // empty when sections are deterministic
  std::string to_csv() const;      // header u_1,...,u_n,section_volume
};

/// λ_n(K) by the polar coordinate formula (1/n)∮ ρ^n.
double volume(const BodyDescriptor& K, const RadonParams& params = {});

/// Exact volume where the variant has one (ball, ellipsoid, box,
/// cross-polytope, cylinder); the cross-check path for the quadrature.
std::optional<double> closed_form_volume(const BodyDescriptor& K);

/// λ_{n-1}(K ∩ u⊥) = (1/(n-1)) ∮_{S ∩ u⊥} ρ^{n-1}.
double section_volume(const BodyDescriptor& K, const Direction& u, const RadonParams& params = {});

/// Section volume together with the Monte-Carlo standard error (n > 3; the
/// stderr is 0 for n = 3 where the rule is deterministic).
struct SectionEstimate {
  double value = 0.0;
  double mc_stderr = 0.0;
};
SectionEstimate section_estimate(const BodyDescriptor& K, const Direction& u,
                                 const RadonParams& params = {});

SectionTable section_table(const BodyDescriptor& K, const std::vector<Direction>& dirs,
                           const RadonParams& params = {});

/// Spherical Radon transform (Rg)(u) = ∮_{S² ∩ u⊥} g.
double radon_transform(const std::function<double(std::span<const double>)>& g, const Direction& u,
                       int circle_nodes = 256);

/// Intersection body L = IM on S²: a sampled descriptor with
/// ρ_L = section function of M, tabulated on the uniform (φ, θ) grid.
BodyDescriptor intersection_body_of(const BodyDescriptor& M, int n_phi = 129, int n_theta = 256,
                                    const RadonParams& params = {});

struct InversionDiagnostics {
  int truncation_degree = 0;
  double odd_energy = 0.0;             // max |odd-degree coefficient| seen
  double extrapolation_residual = 0.0; // Abel route only
  int clamp_count = 0;                 // preimage route only
};

struct InversionResult {
  SphereGrid g;
  std::string method;  // "harmonic" | "eq1" | "abel"
  InversionDiagnostics diag;
  nlohmann::json to_json() const;
};

/// A_K(φ): mean of ρ_K over the latitude circle at polar angle φ.
double latitude_average(const BodyDescriptor& K, const PoleFrame& frame, double phi,
                        int theta_nodes = 256);

struct AbelParams {
  double tol = 1e-3;     // residual gate, in g units
  int levels = 5;        // Richardson ladder depth
  double h0 = 0.02;      // first distance from t = 1 (D(t) is asymptotic only near 1)
  double eta = 1e-4;     // d/dt central-difference step
  int s_nodes = 64;      // Gauss–Legendre nodes for the desingularized integral
  int theta_nodes = 256; // latitude-average resolution
  Exec exec = Exec::parallel;
};

struct AbelResult {
  double g = 0.0;
  double residual = 0.0;
  std::vector<double> ladder;  // extrapolation diagonal
};

/// Funk's limit formula: g(u0) = lim_{t→1⁻} (1/2π) d/dt ∫₀ᵗ x A_K(asin x)/√(t²-x²) dx,
/// desingularized by x = t sin s, limit by Richardson extrapolation.
AbelResult funk_invert_abel(const BodyDescriptor& K, const Direction& u0,
                            const AbelParams& params = {});

struct Eq1Params {
  int theta_nodes = 128;  // must be even; paired (θ, θ+π)
  int phi_nodes = 48;     // Gauss–Legendre on [0, π/2]
  Exec exec = Exec::parallel;
};

/// 2π g(u0) = ρ_K(u0) + (1/2π) ∫₀^{2π} ∫₀^{π/2} (∂ρ_K/∂φ) sec φ dφ dθ.
/// Antipodal θ-pairing cancels the sec φ singularity at the equator.
double funk_invert_eq1(const BodyDescriptor& K, const Direction& u0, const Eq1Params& params = {});

/// Harmonic-multiplier inversion: g_lm = ρ_lm / (2π P_l(0)) for even l.
/// Odd-degree ρ energy above the evenness threshold is an error.
InversionResult harmonic_invert(const SphereGrid& rho, int max_degree);

struct IntersectionVerdict {
  bool verdict = false;      // margin >= -tol
  double margin = 0.0;       // min g over the grid
  Direction witness = Direction::axis(3, 2);  // argmin direction
  double tol = 0.0;
  double cross_check_gap = 0.0;  // |harmonic - eq1| at spot-check nodes
  InversionDiagnostics diag;
};

/// Intersection-body test for smooth-gated bodies in E³: inverts via the
/// harmonic route (spot-checked against Eq. (1)) and reads off min g.
/// tol <= 0 selects the default 1e-6 · max ρ.
IntersectionVerdict is_intersection_body(const BodyDescriptor& K, double tol = 0.0,
                                         int resolution = 64);

class NotIntersectionBodyError : public Error {
public:
  NotIntersectionBodyError(double margin, Direction witness)
      : Error(errc::not_intersection_body,
              "min g = " + std::to_string(margin) + " below tolerance"),
        margin(margin),
        witness(std::move(witness)) {}
  double margin;
  Direction witness;
};

struct PreimageResult {
  BodyDescriptor body;  // sampled M' with ρ = ((n-1) g)^{1/(n-1)}, n = 3
  InversionDiagnostics diag;
};

/// Unique centered star body M' with IM' = L (n = 3). Negative g within
/// [-tol, 0) is clamped to 0 (diagnosed); below -tol throws
/// NotIntersectionBodyError with the witness direction.
PreimageResult preimage_body(const BodyDescriptor& L, double tol, int resolution = 64);

}  // namespace geotom
