#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geotom/radon.hpp"

#include <nlohmann/json.hpp>

namespace geotom {

enum class BPVerdict { consistent, counterexample, dominance_fails };

const char* bp_verdict_name(BPVerdict v);

struct BPParams {
  int n_directions = 0;      // 0: 512 for n <= 6, 2048 for n >= 7
  std::uint64_t seed = 7;
  double section_tol = 1e-6; // slack on the section-dominance hypothesis
  double volume_tol = 1e-6;  // slack on the volume comparison
  RadonParams radon;
};

/// Outcome of one Busemann–Petty comparison. gap(u) = λ_{n-1}(K2 ∩ u⊥) −
/// λ_{n-1}(K1 ∩ u⊥); the hypothesis asks gap >= 0 for all u.
struct BPReport {
  nlohmann::json k1, k2;
  int n_directions = 0;
  std::uint64_t seed = 0;
  double section_tol = 0.0, volume_tol = 0.0;
  double min_gap = 0.0, max_gap = 0.0;
  Direction worst_direction = Direction::axis(3, 2);
  double volume_k1 = 0.0, volume_k2 = 0.0;
  std::string volume_method;  // "closed_form" | "quadrature"
  BPVerdict verdict = BPVerdict::consistent;

  nlohmann::json to_json() const;
};

BPReport bp_compare(const BodyDescriptor& K1, const BodyDescriptor& K2, const BPParams& params = {});

struct LutwakParams {
  int n_directions = 512;
  std::uint64_t seed = 11;
  double tol = 1e-6;
  int ib_n_phi = 129;       // intersection-body tabulation grid
  int ib_n_theta = 256;
  RadonParams radon;
};

struct LutwakReport {
  double scale = 0.0;        // smallest s with sections(s·L2) >= sections(IM) on the sample
  double volume_l1 = 0.0;    // λ₃(IM)
  double volume_sl2 = 0.0;   // λ₃(s·L2)
  double margin = 0.0;       // (volume_sl2 − volume_l1) / volume_l1
  nlohmann::json to_json() const;
};

/// Lutwak's theorem as a runnable property: L1 = IM dominated section-wise by
/// s·L2 must satisfy λ₃(L1) <= λ₃(s·L2).
LutwakReport lutwak_check(const BodyDescriptor& M, const BodyDescriptor& L2,
                          const LutwakParams& params = {});

struct PositivityRow {
  int body_id = 0;
  nlohmann::json body;
  double margin = 0.0;
  double volume = 0.0;
  bool verdict = false;
};

struct PositivityResult {
  double min_margin = 0.0;
  nlohmann::json worst_body;
  int rejections = 0;  // convexity-probe regenerations
  std::vector<PositivityRow> rows;

  nlohmann::json to_json() const;
  std::string to_csv() const;  // header body_id,margin,volume,verdict
};

struct PositivityParams {
  double tol = 1e-6;
  int resolution = 64;
  int probe_trials = 10000;
  double max_perturbation = 0.15;  // fraction of r0, degrees <= 6
};

/// Positivity of g for random smooth centered convex bodies in E³
/// (ellipsoids with axis ratios in [1,5] and convex perturbed balls).
PositivityResult e3_positivity_suite(int count, std::uint64_t seed,
                                     const PositivityParams& params = {});

struct CounterexampleResult {
  BodyDescriptor cube;
  BodyDescriptor ball;
  double ball_radius = 0.0;
  double max_cube_section = 0.0;  // √2, the maximal hyperplane section of the unit cube
  BPReport report;

  nlohmann::json to_json() const;
};

/// Ball's negative answer for n >= 10: unit cube vs the ball whose every
/// central section equals √2 (the cube's maximal section), so the section
/// hypothesis holds while the ball's volume is < 1.
CounterexampleResult ball_counterexample(int n, BPParams params = {});

struct MaxSectionResult {
  Direction direction = Direction::axis(3, 2);
  double value = 0.0;
};

/// Derivative-free ascent of u ↦ λ_{n-1}(K ∩ u⊥) (tangent step + renormalize),
/// best over seeded restarts.
MaxSectionResult max_section_search(const BodyDescriptor& K, int restarts, std::uint64_t seed,
                                    const RadonParams& params = {});

}  // namespace geotom
