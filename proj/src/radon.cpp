#include "geotom/radon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

namespace geotom {

std::string SectionTable::to_csv() const {
  std::string out;
  const int n = directions.empty() ? 0 : directions.front().dim();
  for (int i = 1; i <= n; ++i) {
    out += "u_" + std::to_string(i) + ",";
  }
  out += "section_volume\n";
  char buf[64];
  for (std::size_t k = 0; k < directions.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,", directions[k][static_cast<std::size_t>(i)]);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", values[k]);
    out += buf;
  }
  return out;
}

double volume(const BodyDescriptor& K, const RadonParams& params) {
  const int n = K.dim();
  const auto rule = (n == 3) ? sphere_rule(3, params.sphere_resolution)
                             : sphere_rule(n, static_cast<int>(params.mc_samples), params.seed);
  const double inv_n = 1.0 / n;
  return rule.integrate(
      [&](std::span<const double> u) { return std::pow(radial(K, u), n) * inv_n; }, params.exec);
}

std::optional<double> closed_form_volume(const BodyDescriptor& K) {
  return std::visit(
      [&](const auto& b) -> std::optional<double> {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return unit_ball_volume(b.n) * std::pow(b.r, b.n);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double v = unit_ball_volume(static_cast<int>(b.semi_axes.size()));
          for (double a : b.semi_axes) v *= a;
          return v;
        } else if constexpr (std::is_same_v<T, Box>) {
          double v = 1.0;
          for (double h : b.half_sides) v *= 2.0 * h;
          return v;
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          double v = std::pow(2.0 * b.a, b.n);
          for (int k = 2; k <= b.n; ++k) v /= k;
          return v;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return unit_ball_volume(b.n - 1) * std::pow(b.r, b.n - 1) * 2.0 * b.half_height;
        } else {
          return std::nullopt;
        }
      },
      K.v());
}

SectionEstimate section_estimate(const BodyDescriptor& K, const Direction& u,
                                 const RadonParams& params) {
  const int n = K.dim();
  require(u.dim() == n, errc::invalid_parameter, "section_volume: dimension mismatch");
  const double p = n - 1;
  if (n == 3) {
    const auto rule = great_circle_rule(u, params.circle_nodes);
    const double v = rule.integrate(
        [&](std::span<const double> w) { return radial(K, w) * radial(K, w); }, params.exec);
    return {0.5 * v, 0.0};
  }
  const auto rule = subsphere_rule(u, params.mc_samples, params.seed);
  std::vector<double> vals(rule.size());
  for_each_index(params.exec, rule.size(),
                 [&](std::size_t i) { vals[i] = std::pow(radial(K, rule.node(i)), p); });
  const double mean = pairwise_sum(vals) / static_cast<double>(vals.size());
  std::vector<double> sq(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = (vals[i] - mean) * (vals[i] - mean);
  const double var = pairwise_sum(sq) / (static_cast<double>(vals.size()) - 1.0);
  const double measure = sphere_surface_measure(n - 1);
  const double value = measure * mean / p;
  const double stderr_ = measure * std::sqrt(var / static_cast<double>(vals.size())) / p;
  return {value, stderr_};
}

double section_volume(const BodyDescriptor& K, const Direction& u, const RadonParams& params) {
  return section_estimate(K, u, params).value;
}

SectionTable section_table(const BodyDescriptor& K, const std::vector<Direction>& dirs,
                           const RadonParams& params) {
  SectionTable table;
  table.directions = dirs;
  table.values.resize(dirs.size());
  const bool mc = K.dim() > 3;
  if (mc) table.mc_stderr.resize(dirs.size());
  // Inner kernels stay serial here; the direction loop is the parallel axis.
  // Monte-Carlo directions get independent derived seeds.
  for_each_index(params.exec, dirs.size(), [&](std::size_t i) {
    RadonParams inner = params;
    inner.exec = Exec::serial;
    if (mc) inner.seed = mix_seed(params.seed, i);
    const auto est = section_estimate(K, dirs[i], inner);
    table.values[i] = est.value;
    if (mc) table.mc_stderr[i] = est.mc_stderr;
  });
  return table;
}

double radon_transform(const std::function<double(std::span<const double>)>& g, const Direction& u,
                       int circle_nodes) {
  require(u.dim() == 3, errc::invalid_parameter, "radon_transform: S² only");
  const auto rule = great_circle_rule(u, circle_nodes);
  return rule.integrate(g, Exec::serial);
}

BodyDescriptor intersection_body_of(const BodyDescriptor& M, int n_phi, int n_theta,
                                    const RadonParams& params) {
  require(M.dim() == 3, errc::invalid_parameter,
          "intersection_body_of: S² only (use section_table for n > 3)");
  require(n_phi >= 5 && n_theta >= 4 && n_theta % 2 == 0, errc::invalid_parameter,
          "intersection_body_of: need n_phi >= 5 and even n_theta >= 4");
  Sampled s;
  s.n_phi = n_phi;
  s.n_theta = n_theta;
  s.order = 3;
  s.values.assign(static_cast<std::size_t>(n_phi) * static_cast<std::size_t>(n_theta), 0.0);
  RadonParams inner = params;
  inner.exec = Exec::serial;
  for_each_index(params.exec, static_cast<std::size_t>(n_phi), [&](std::size_t i) {
    const double phi = kPi * static_cast<double>(i) / (n_phi - 1);
    const double sp = std::sin(phi), cp = std::cos(phi);
    for (int j = 0; j < n_theta; ++j) {
      const double th = kTwoPi * j / n_theta;
      const Direction u(std::vector<double>{sp * std::cos(th), sp * std::sin(th), cp});
      s.values[i * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(j)] =
          section_volume(M, u, inner);
    }
  });
  // Sampled construction re-asserts centeredness (evenness) of the table.
  return BodyDescriptor(std::move(s));
}

double latitude_average(const BodyDescriptor& K, const PoleFrame& frame, double phi,
                        int theta_nodes) {
  require(phi >= -1e-12 && phi <= kPi + 1e-12, errc::invalid_parameter,
          "latitude_average: phi in [0, pi] required");
  require(theta_nodes >= 4, errc::invalid_parameter, "latitude_average: theta_nodes >= 4");
  std::vector<double> vals(static_cast<std::size_t>(theta_nodes));
  for (int k = 0; k < theta_nodes; ++k) {
    const auto v = frame.direction(kTwoPi * k / theta_nodes, phi);
    vals[static_cast<std::size_t>(k)] = radial(K, std::span<const double>(v));
  }
  return pairwise_sum(vals) / theta_nodes;
}

// ---- Funk inversion --------------------------------------------------------

AbelResult funk_invert_abel(const BodyDescriptor& K, const Direction& u0,
                            const AbelParams& params) {
  require(K.dim() == 3 && u0.dim() == 3, errc::invalid_parameter, "funk_invert_abel: S² only");
  require(smooth_gate(K), errc::unsupported_body, "funk_invert_abel: body is not C1");
  require(params.levels >= 3, errc::invalid_parameter, "funk_invert_abel: levels >= 3");
  const auto frame = PoleFrame::standard(u0);
  const auto gl = gauss_legendre(params.s_nodes);

  // Inner integral, desingularized by x = t sin s:
  //   I(t) = t ∫_0^{π/2} sin(s) A_K(asin(t sin s)) ds
  auto inner = [&](double t) {
    std::vector<double> vals(static_cast<std::size_t>(params.s_nodes));
    for_each_index(params.exec, vals.size(), [&](std::size_t i) {
      const double s = 0.25 * kPi * (gl.nodes[i] + 1.0);
      const double x = t * std::sin(s);
      vals[i] = gl.weights[i] * 0.25 * kPi * std::sin(s) *
                latitude_average(K, frame, std::asin(std::min(x, 1.0)), params.theta_nodes);
    });
    return t * pairwise_sum(vals);
  };
  auto deriv = [&](double t) {
    return (inner(t + params.eta) - inner(t - params.eta)) / (2.0 * params.eta);
  };

  // Richardson ladder for the t -> 1⁻ limit, step-halved distances from 1.
  const int L = params.levels;
  std::vector<std::vector<double>> R(static_cast<std::size_t>(L));
  std::vector<double> diag;
  for (int k = 0; k < L; ++k) {
    const double h = params.h0 * std::pow(0.5, k);
    R[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(k) + 1, 0.0);
    R[static_cast<std::size_t>(k)][0] = deriv(1.0 - h);
    for (int j = 1; j <= k; ++j) {
      const double prev = R[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)];
      const double up = R[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      R[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
          prev + (prev - up) / (std::pow(2.0, j) - 1.0);
    }
    diag.push_back(R[static_cast<std::size_t>(k)].back());
  }

  AbelResult res;
  res.ladder = diag;
  res.g = diag.back() / kTwoPi;
  res.residual = std::abs(diag[diag.size() - 1] - diag[diag.size() - 2]) / kTwoPi;
  if (res.residual > params.tol)
    fail(errc::no_convergence, "funk_invert_abel: extrapolation residual " +
                                   std::to_string(res.residual) + " exceeds tol " +
                                   std::to_string(params.tol));
  return res;
}

namespace {

// theta-paired Eq. (1) correction integral
//   S = ∫_0^{2π} ∫_0^{π/2} (∂ρ/∂φ) sec φ dφ dθ
// evaluated as sum over antipodal θ-pairs, Gauss–Legendre in φ. Evenness of
// the body makes the paired integrand smooth through the equator.
double eq1_correction(const BodyDescriptor& K, const PoleFrame& frame, const Eq1Params& params) {
  require(params.theta_nodes >= 4 && params.theta_nodes % 2 == 0, errc::invalid_parameter,
          "funk_invert_eq1: theta_nodes must be even and >= 4");
  require(params.phi_nodes >= 4, errc::invalid_parameter, "funk_invert_eq1: phi_nodes >= 4");
  const int m = params.theta_nodes;
  const int pairs = m / 2;
  const auto gl = gauss_legendre(params.phi_nodes);
  const double wtheta = kTwoPi / m;
  std::vector<double> contrib(static_cast<std::size_t>(pairs));
  for_each_index(params.exec, contrib.size(), [&](std::size_t j) {
    const double theta = kTwoPi * static_cast<double>(j) / m;
    std::vector<double> vals(static_cast<std::size_t>(params.phi_nodes));
    for (int i = 0; i < params.phi_nodes; ++i) {
      const double phi = 0.25 * kPi * (gl.nodes[static_cast<std::size_t>(i)] + 1.0);
      const double paired =
          radial_dphi(K, frame, theta, phi) + radial_dphi(K, frame, theta + kPi, phi);
      vals[static_cast<std::size_t>(i)] = gl.weights[static_cast<std::size_t>(i)] * 0.25 * kPi *
                                          paired / std::cos(phi);
    }
    contrib[j] = wtheta * pairwise_sum(vals);
  });
  return pairwise_sum(contrib);
}

}  // namespace

double funk_invert_eq1(const BodyDescriptor& K, const Direction& u0, const Eq1Params& params) {
  require(K.dim() == 3 && u0.dim() == 3, errc::invalid_parameter, "funk_invert_eq1: S² only");
  require(smooth_gate(K), errc::unsupported_body, "funk_invert_eq1: body is not C1");

  // Revolution body inverted at its own pole: the integrand is
  // θ-independent, so collapse to a dense 1-D quadrature.
  if (const auto* rev = K.get_if<Revolution>(); rev && std::abs(std::abs(u0[2]) - 1.0) < 1e-14) {
    const UniformHermite interp(0.0, 0.5 * kPi, rev->profile);
    const int n1d = 2048;
    const auto gl = gauss_legendre(n1d);
    std::vector<double> vals(static_cast<std::size_t>(n1d));
    for_each_index(params.exec, vals.size(), [&](std::size_t i) {
      const double phi = 0.25 * kPi * (gl.nodes[i] + 1.0);
      vals[i] = gl.weights[i] * 0.25 * kPi * interp.derivative(phi) / std::cos(phi);
    });
    const double corr = pairwise_sum(vals);
    return (radial(K, u0) + corr) / kTwoPi;
  }

  const auto frame = PoleFrame::standard(u0);
  const double corr = eq1_correction(K, frame, params) / kTwoPi;
  return (radial(K, u0) + corr) / kTwoPi;
}

InversionResult harmonic_invert(const SphereGrid& rho, int max_degree) {
  auto spec = analyze(rho, max_degree);
  require(std::abs(legendre_at_zero(2 * (max_degree / 2))) > 1e-8, errc::invalid_parameter,
          "harmonic_invert: Radon multiplier underflow at requested degree");
  const double odd = spec.odd_degree_energy();
  const double evenness_tol = 1e-8 * std::max(1.0, spec.max_abs());
  if (odd > evenness_tol)
    fail(errc::not_even, "harmonic_invert: odd-degree energy " + std::to_string(odd) +
                             " exceeds evenness threshold");
  HarmonicSpectrum gspec(max_degree);
  for (int l = 0; l <= max_degree; l += 2) {
    const double mult = kTwoPi * legendre_at_zero(l);
    for (int m = -l; m <= l; ++m) gspec.at(l, m) = spec.at(l, m) / mult;
  }
  InversionResult res;
  res.g = synthesize_grid(gspec, rho.resolution);
  res.method = "harmonic";
  res.diag.truncation_degree = max_degree;
  res.diag.odd_energy = odd;
  return res;
}

IntersectionVerdict is_intersection_body(const BodyDescriptor& K, double tol, int resolution) {
  require(K.dim() == 3, errc::invalid_parameter, "is_intersection_body: S² only");
  require(smooth_gate(K), errc::unsupported_body, "is_intersection_body: body is not C1");
  const auto rho = sample_sphere(resolution, [&](std::span<const double> u) { return radial(K, u); });
  double rho_max = 0.0;
  for (double v : rho.values) rho_max = std::max(rho_max, v);
  if (tol <= 0.0) tol = 1e-6 * rho_max;

  auto inv = harmonic_invert(rho, resolution / 2);

  const auto dirs = sphere_grid_directions(resolution);
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < inv.g.values.size(); ++i)
    if (inv.g.values[i] < inv.g.values[argmin]) argmin = i;

  // Spot-check the harmonic route against the paper's Eq. (1) route at a few
  // deterministic pseudo-random nodes.
  double gap = 0.0;
  for (int c = 0; c < 3; ++c) {
    const std::size_t idx = mix_seed(0xC0FFEE, static_cast<std::uint64_t>(c + resolution)) %
                            inv.g.values.size();
    const double eq1 = funk_invert_eq1(K, dirs[idx]);
    gap = std::max(gap, std::abs(eq1 - inv.g.values[idx]));
  }
  const double gate = 1e-3 * std::max(1.0, rho_max);
  if (gap > gate)
    fail(errc::no_convergence, "is_intersection_body: harmonic and Eq.(1) routes disagree by " +
                                   std::to_string(gap));

  IntersectionVerdict v;
  v.margin = inv.g.values[argmin];
  v.witness = dirs[argmin];
  v.tol = tol;
  v.verdict = v.margin >= -tol;
  v.cross_check_gap = gap;
  v.diag = inv.diag;
  return v;
}

PreimageResult preimage_body(const BodyDescriptor& L, double tol, int resolution) {
  require(L.dim() == 3, errc::invalid_parameter, "preimage_body: S² only");
  require(smooth_gate(L), errc::unsupported_body,
          "preimage_body: descriptor is not C1 (inversion route requires smoothness)");
  require(tol >= 0.0, errc::invalid_parameter, "preimage_body: tol >= 0 required");
  const auto rho = sample_sphere(resolution, [&](std::span<const double> u) { return radial(L, u); });
  auto spec = analyze(rho, resolution / 2);
  const double odd = spec.odd_degree_energy();
  const double evenness_tol = 1e-8 * std::max(1.0, spec.max_abs());
  if (odd > evenness_tol)
    fail(errc::not_even, "preimage_body: input radial function is not even");
  HarmonicSpectrum gspec(spec.max_degree);
  for (int l = 0; l <= spec.max_degree; l += 2) {
    const double mult = kTwoPi * legendre_at_zero(l);
    for (int m = -l; m <= l; ++m) gspec.at(l, m) = spec.at(l, m) / mult;
  }

  // rho_{M'} = sqrt(2 g) on the uniform grid; negatives in [-tol, 0) clamp to 0.
  const int n_phi = resolution + 1;
  const int n_theta = 2 * resolution;
  Sampled s;
  s.n_phi = n_phi;
  s.n_theta = n_theta;
  s.order = 3;
  s.values.assign(static_cast<std::size_t>(n_phi) * n_theta, 0.0);
  int clamped = 0;
  double min_g = std::numeric_limits<double>::infinity();
  std::size_t witness_idx = 0;
  std::vector<Direction> grid_dirs;
  grid_dirs.reserve(s.values.size());
  for (int i = 0; i < n_phi; ++i) {
    const double phi = kPi * static_cast<double>(i) / (n_phi - 1);
    const double sp = std::sin(phi), cp = std::cos(phi);
    for (int j = 0; j < n_theta; ++j) {
      const double th = kTwoPi * j / n_theta;
      grid_dirs.emplace_back(std::vector<double>{sp * std::cos(th), sp * std::sin(th), cp});
    }
  }
  std::vector<double> g_vals(s.values.size());
  for_each_index(Exec::parallel, g_vals.size(),
                 [&](std::size_t k) { g_vals[k] = synthesize(gspec, grid_dirs[k].coords()); });
  for (std::size_t k = 0; k < g_vals.size(); ++k) {
    if (g_vals[k] < min_g) {
      min_g = g_vals[k];
      witness_idx = k;
    }
  }
  if (min_g < -tol) throw NotIntersectionBodyError(min_g, grid_dirs[witness_idx]);
  for (std::size_t k = 0; k < g_vals.size(); ++k) {
    double g = g_vals[k];
    if (g < 0.0) {
      g = 0.0;
      ++clamped;
    }
    s.values[k] = std::sqrt(2.0 * g);
  }
  PreimageResult res{BodyDescriptor(std::move(s)), {}};
  res.diag.truncation_degree = spec.max_degree;
  res.diag.odd_energy = odd;
  res.diag.clamp_count = clamped;
  return res;
}

nlohmann::json InversionResult::to_json() const {
  nlohmann::json j;
  j["method"] = method;
  j["resolution"] = g.resolution;
  j["values"] = g.values;
  j["diagnostics"] = {{"truncation_degree", diag.truncation_degree},
                      {"odd_energy", diag.odd_energy},
                      {"extrapolation_residual", diag.extrapolation_residual},
                      {"clamp_count", diag.clamp_count}};
  return j;
}

}  // namespace geotom
