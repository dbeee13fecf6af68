#include "geotom/sphere_quad.hpp"

#include <algorithm>
#include <cmath>

namespace geotom {

Direction::Direction(std::vector<double> coords) : coords_(std::move(coords)) {
  require(coords_.size() >= 2, errc::invalid_parameter, "Direction: n >= 2 required");
  double nrm2 = 0.0;
  for (double x : coords_) {
    require(std::isfinite(x), errc::invalid_parameter, "Direction: non-finite coordinate");
    nrm2 += x * x;
  }
  require(nrm2 > 1e-300, errc::invalid_parameter, "Direction: zero vector");
  const double inv = 1.0 / std::sqrt(nrm2);
  for (double& x : coords_) x *= inv;
}

Direction Direction::operator-() const {
  std::vector<double> c(coords_);
  for (double& x : c) x = -x;
  return Direction(std::move(c));
}

Direction Direction::axis(int n, int i) {
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  c[static_cast<std::size_t>(i)] = 1.0;
  return Direction(std::move(c));
}

QuadratureRule::QuadratureRule(int dim, SphereDomain domain, std::vector<double> nodes,
                               std::vector<double> weights, std::optional<Direction> axis)
    : dim_(dim), domain_(domain), nodes_(std::move(nodes)), weights_(std::move(weights)),
      axis_(std::move(axis)) {
  require(dim_ >= 2, errc::invalid_parameter, "QuadratureRule: dim >= 2");
  require(nodes_.size() == weights_.size() * static_cast<std::size_t>(dim_),
          errc::invalid_parameter, "QuadratureRule: node/weight size mismatch");
  for (double w : weights_)
    require(w > 0.0, errc::invalid_parameter, "QuadratureRule: weights must be positive");
}

double QuadratureRule::weight_sum() const { return pairwise_sum(weights_); }

std::vector<Direction> orthonormal_basis(const Direction& u) {
  const int n = u.dim();
  // Householder reflection H = I - 2 w w^T with w ∝ u - e1 swaps u and e1;
  // the images of e2..en then span u⊥. Degenerate only at u = e1 exactly.
  std::vector<double> w(u.coords().begin(), u.coords().end());
  w[0] -= 1.0;
  double wn2 = 0.0;
  for (double x : w) wn2 += x * x;

  std::vector<Direction> basis;
  basis.reserve(static_cast<std::size_t>(n - 1));
  if (wn2 < 1e-28) {  // u == e1 to machine precision
    for (int k = 1; k < n; ++k) basis.push_back(Direction::axis(n, k));
    return basis;
  }
  const double scale = 2.0 / wn2;
  for (int k = 1; k < n; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[static_cast<std::size_t>(k)] = 1.0;
    const double proj = scale * w[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= proj * w[static_cast<std::size_t>(i)];
    basis.emplace_back(std::move(v));
  }
  return basis;
}

namespace {

// The subsphere orthogonal to u equals the one orthogonal to -u; building
// the frame from a canonical representative makes the rules for u and -u
// bit-identical, so transforms are exactly even.
Direction canonical_antipodal(const Direction& u) {
  for (double x : u.coords()) {
    if (x > 0.0) return u;
    if (x < 0.0) return -u;
  }
  return u;
}

}  // namespace

QuadratureRule great_circle_rule(const Direction& u, int m) {
  require(u.dim() == 3, errc::invalid_parameter, "great_circle_rule: S² only");
  require(m >= 4, errc::invalid_parameter, "great_circle_rule: m >= 4 required");
  const auto basis = orthonormal_basis(canonical_antipodal(u));
  const auto e1 = basis[0].coords();
  const auto e2 = basis[1].coords();
  std::vector<double> nodes(static_cast<std::size_t>(m) * 3);
  std::vector<double> weights(static_cast<std::size_t>(m), kTwoPi / m);
  for (int k = 0; k < m; ++k) {
    const double t = kTwoPi * k / m;
    const double c = std::cos(t), s = std::sin(t);
    for (int i = 0; i < 3; ++i) nodes[static_cast<std::size_t>(k) * 3 + i] = c * e1[i] + s * e2[i];
  }
  return QuadratureRule(3, SphereDomain::subsphere, std::move(nodes), std::move(weights), u);
}

QuadratureRule subsphere_rule(const Direction& u, std::size_t n_samples, std::uint64_t seed) {
  const int n = u.dim();
  require(n > 3, errc::invalid_parameter, "subsphere_rule: n > 3 required (use great_circle_rule)");
  require(n_samples >= 100, errc::invalid_parameter, "subsphere_rule: N >= 100 required");
  const auto basis = orthonormal_basis(canonical_antipodal(u));
  const int k = n - 1;
  Rng rng(seed);
  std::vector<double> nodes(n_samples * static_cast<std::size_t>(n), 0.0);
  std::vector<double> z(static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < n_samples; ++s) {
    double nrm2 = 0.0;
    do {
      nrm2 = 0.0;
      for (auto& x : z) {
        x = rng.normal();
        nrm2 += x * x;
      }
    } while (nrm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(nrm2);
    double* node = nodes.data() + s * static_cast<std::size_t>(n);
    for (int j = 0; j < k; ++j) {
      const auto bj = basis[static_cast<std::size_t>(j)].coords();
      const double c = z[static_cast<std::size_t>(j)] * inv;
      for (int i = 0; i < n; ++i) node[i] += c * bj[i];
    }
  }
  const double w = sphere_surface_measure(n - 1) / static_cast<double>(n_samples);
  std::vector<double> weights(n_samples, w);
  return QuadratureRule(n, SphereDomain::subsphere, std::move(nodes), std::move(weights), u);
}

namespace {

struct S2Product {
  GaussLegendre gl;  // x = cos φ, ascending
  int n_theta = 0;
  double theta_weight = 0.0;
};

S2Product s2_product(int resolution) {
  require(resolution >= 8, errc::invalid_parameter, "sphere_rule: resolution >= 8 required");
  S2Product p;
  p.gl = gauss_legendre(resolution);
  p.n_theta = 2 * resolution;
  p.theta_weight = kTwoPi / p.n_theta;
  return p;
}

}  // namespace

QuadratureRule sphere_rule(int n, int resolution, std::uint64_t seed) {
  require(n >= 2, errc::invalid_parameter, "sphere_rule: n >= 2 required");
  if (n == 3) {
    const auto p = s2_product(resolution);
    const std::size_t count = static_cast<std::size_t>(resolution) * p.n_theta;
    std::vector<double> nodes(count * 3);
    std::vector<double> weights(count);
    for (int i = 0; i < resolution; ++i) {
      const double x = p.gl.nodes[static_cast<std::size_t>(i)];
      const double sin_phi = std::sqrt(std::max(0.0, 1.0 - x * x));
      const double wi = p.gl.weights[static_cast<std::size_t>(i)] * p.theta_weight;
      for (int j = 0; j < p.n_theta; ++j) {
        const double th = kTwoPi * j / p.n_theta;
        const std::size_t idx = static_cast<std::size_t>(i) * p.n_theta + j;
        nodes[idx * 3 + 0] = sin_phi * std::cos(th);
        nodes[idx * 3 + 1] = sin_phi * std::sin(th);
        nodes[idx * 3 + 2] = x;
        weights[idx] = wi;
      }
    }
    return QuadratureRule(3, SphereDomain::full_sphere, std::move(nodes), std::move(weights));
  }
  require(resolution >= 8, errc::invalid_parameter, "sphere_rule: resolution >= 8 required");
  const std::size_t count = static_cast<std::size_t>(resolution);
  Rng rng(seed);
  std::vector<double> nodes(count * static_cast<std::size_t>(n));
  std::vector<double> weights(count, sphere_surface_measure(n) / static_cast<double>(count));
  for (std::size_t s = 0; s < count; ++s) {
    const auto v = rng.unit_vector(n);
    std::copy(v.begin(), v.end(), nodes.begin() + s * static_cast<std::size_t>(n));
  }
  return QuadratureRule(n, SphereDomain::full_sphere, std::move(nodes), std::move(weights));
}

// --- harmonics --------------------------------------------------------------

std::vector<double> legendre_bar_table(int max_degree, double x) {
  const int L = max_degree;
  std::vector<double> p(static_cast<std::size_t>((L + 1) * (L + 2) / 2), 0.0);
  auto idx = [](int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); };
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  p[idx(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
  if (L == 0) return p;
  // Diagonal, then first off-diagonal, then the three-term recurrence.
  for (int m = 1; m <= L; ++m)
    p[idx(m, m)] = p[idx(m - 1, m - 1)] * s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int m = 0; m < L; ++m)
    p[idx(m + 1, m)] = p[idx(m, m)] * x * std::sqrt(2.0 * m + 3.0);
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p[idx(l, m)] = a * (x * p[idx(l - 1, m)] - b * p[idx(l - 2, m)]);
    }
  }
  return p;
}

double sph_harm(int l, int m, double theta, double phi) {
  require(l >= 0 && std::abs(m) <= l, errc::invalid_parameter, "sph_harm: need 0 <= |m| <= l");
  require(phi >= -1e-12 && phi <= kPi + 1e-12, errc::invalid_parameter,
          "sph_harm: phi must lie in [0, pi]");
  const auto tbl = legendre_bar_table(l, std::cos(phi));
  const double pbar = tbl[static_cast<std::size_t>(l * (l + 1) / 2 + std::abs(m))];
  if (m == 0) return pbar;
  const double sqrt2 = std::sqrt(2.0);
  return m > 0 ? sqrt2 * pbar * std::cos(m * theta) : sqrt2 * pbar * std::sin(-m * theta);
}

double sph_harm_dir(int l, int m, std::span<const double> u) {
  const double z = std::clamp(u[2], -1.0, 1.0);
  const double theta = std::atan2(u[1], u[0]);
  return sph_harm(l, m, theta, std::acos(z));
}

double HarmonicSpectrum::odd_degree_energy() const {
  double e = 0.0;
  for (int l = 1; l <= max_degree; l += 2)
    for (int m = -l; m <= l; ++m) e = std::max(e, std::abs(at(l, m)));
  return e;
}

double HarmonicSpectrum::max_abs() const {
  double e = 0.0;
  for (double c : coeffs) e = std::max(e, std::abs(c));
  return e;
}

SphereGrid sample_sphere(int resolution,
                         const std::function<double(std::span<const double>)>& f, Exec exec) {
  const auto rule = sphere_rule(3, resolution);
  SphereGrid g;
  g.resolution = resolution;
  g.values.resize(rule.size());
  for_each_index(exec, rule.size(), [&](std::size_t i) { g.values[i] = f(rule.node(i)); });
  return g;
}

HarmonicSpectrum analyze(const SphereGrid& grid, int max_degree) {
  const int res = grid.resolution;
  require(res >= 8, errc::invalid_parameter, "analyze: grid resolution >= 8 required");
  require(grid.values.size() == static_cast<std::size_t>(res) * (2 * res),
          errc::invalid_parameter, "analyze: grid size does not match resolution");
  require(max_degree >= 0 && max_degree <= res / 2, errc::invalid_parameter,
          "analyze: max_degree exceeds grid Nyquist (L <= resolution/2)");
  const auto p = s2_product(res);
  const int L = max_degree;
  const int nth = p.n_theta;

  // Separable sums: first the azimuthal Fourier sums per latitude, then the
  // Legendre-weighted latitude sums.
  HarmonicSpectrum spec(L);
  std::vector<double> fc(static_cast<std::size_t>(res) * (L + 1), 0.0);
  std::vector<double> fs(static_cast<std::size_t>(res) * (L + 1), 0.0);
  for_each_index(Exec::parallel, static_cast<std::size_t>(res), [&](std::size_t i) {
    for (int m = 0; m <= L; ++m) {
      double cs = 0.0, sn = 0.0;
      for (int j = 0; j < nth; ++j) {
        const double th = kTwoPi * j / nth;
        const double v = grid.values[i * nth + static_cast<std::size_t>(j)];
        cs += v * std::cos(m * th);
        sn += v * std::sin(m * th);
      }
      fc[i * (L + 1) + static_cast<std::size_t>(m)] = cs * p.theta_weight;
      fs[i * (L + 1) + static_cast<std::size_t>(m)] = sn * p.theta_weight;
    }
  });
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i < res; ++i) {
    const double x = p.gl.nodes[static_cast<std::size_t>(i)];
    const double w = p.gl.weights[static_cast<std::size_t>(i)];
    const auto tbl = legendre_bar_table(L, x);
    for (int l = 0; l <= L; ++l) {
      for (int m = 0; m <= l; ++m) {
        const double pb = tbl[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
        if (m == 0) {
          spec.at(l, 0) += w * pb * fc[static_cast<std::size_t>(i) * (L + 1)];
        } else {
          spec.at(l, m) += w * sqrt2 * pb * fc[static_cast<std::size_t>(i) * (L + 1) + m];
          spec.at(l, -m) += w * sqrt2 * pb * fs[static_cast<std::size_t>(i) * (L + 1) + m];
        }
      }
    }
  }
  return spec;
}

double synthesize(const HarmonicSpectrum& spec, std::span<const double> u) {
  const int L = spec.max_degree;
  const double z = std::clamp(u[2], -1.0, 1.0);
  const double theta = std::atan2(u[1], u[0]);
  const auto tbl = legendre_bar_table(L, z);
  const double sqrt2 = std::sqrt(2.0);
  double acc = 0.0;
  for (int l = 0; l <= L; ++l) {
    acc += spec.at(l, 0) * tbl[static_cast<std::size_t>(l * (l + 1) / 2)];
    for (int m = 1; m <= l; ++m) {
      const double pb = tbl[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
      acc += sqrt2 * pb *
             (spec.at(l, m) * std::cos(m * theta) + spec.at(l, -m) * std::sin(m * theta));
    }
  }
  return acc;
}

SphereGrid synthesize_grid(const HarmonicSpectrum& spec, int resolution) {
  const auto p = s2_product(resolution);
  const int L = spec.max_degree;
  const int nth = p.n_theta;
  SphereGrid g;
  g.resolution = resolution;
  g.values.assign(static_cast<std::size_t>(resolution) * nth, 0.0);
  const double sqrt2 = std::sqrt(2.0);
  for_each_index(Exec::parallel, static_cast<std::size_t>(resolution), [&](std::size_t i) {
    const double x = p.gl.nodes[i];
    const auto tbl = legendre_bar_table(L, x);
    for (int j = 0; j < nth; ++j) {
      const double th = kTwoPi * j / nth;
      double acc = 0.0;
      for (int l = 0; l <= L; ++l) {
        acc += spec.at(l, 0) * tbl[static_cast<std::size_t>(l * (l + 1) / 2)];
        for (int m = 1; m <= l; ++m) {
          const double pb = tbl[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
          acc += sqrt2 * pb *
                 (spec.at(l, m) * std::cos(m * th) + spec.at(l, -m) * std::sin(m * th));
        }
      }
      g.values[i * nth + static_cast<std::size_t>(j)] = acc;
    }
  });
  return g;
}

std::vector<Direction> sphere_grid_directions(int resolution) {
  const auto rule = sphere_rule(3, resolution);
  std::vector<Direction> dirs;
  dirs.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto nd = rule.node(i);
    dirs.emplace_back(std::vector<double>(nd.begin(), nd.end()));
  }
  return dirs;
}

}  // namespace geotom
