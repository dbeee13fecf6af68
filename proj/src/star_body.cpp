#include "geotom/star_body.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

namespace geotom {

namespace {

constexpr double kEvennessTol = 1e-9;

int variant_dim(const BodyVariant& v) {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) return b.n;
        if constexpr (std::is_same_v<T, Ellipsoid>) return static_cast<int>(b.semi_axes.size());
        if constexpr (std::is_same_v<T, Box>) return static_cast<int>(b.half_sides.size());
        if constexpr (std::is_same_v<T, CrossPolytope>) return b.n;
        if constexpr (std::is_same_v<T, Cylinder>) return b.n;
        if constexpr (std::is_same_v<T, Revolution>) return 3;
        if constexpr (std::is_same_v<T, PerturbedBall>) return 3;
        if constexpr (std::is_same_v<T, Sampled>) return 3;
      },
      v);
}

Smoothness variant_smoothness(const BodyVariant& v) {
  return std::visit(
      [](const auto& b) -> Smoothness {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball> || std::is_same_v<T, Ellipsoid> ||
                      std::is_same_v<T, PerturbedBall>)
          return Smoothness::cinf;
        else if constexpr (std::is_same_v<T, Revolution>)
          return b.smoothness;
        else if constexpr (std::is_same_v<T, Sampled>)
          return b.order >= 3 ? Smoothness::c1 : Smoothness::c0;
        else
          return Smoothness::c0;
      },
      v);
}

// Catmull–Rom kernel on a uniform grid.
double catmull_rom(double f0, double f1, double f2, double f3, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return 0.5 * (2.0 * f1 + (-f0 + f2) * t + (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) * t2 +
                (-f0 + 3.0 * f1 - 3.0 * f2 + f3) * t3);
}

// Grid fetch with θ-wrap and even extension across the poles:
// row -k ≡ (row k, θ + π); row n_phi-1+k ≡ (row n_phi-1-k, θ + π).
double sampled_fetch(const Sampled& s, int i, int j) {
  int shift = 0;
  if (i < 0) {
    i = -i;
    shift = s.n_theta / 2;
  } else if (i > s.n_phi - 1) {
    i = 2 * (s.n_phi - 1) - i;
    shift = s.n_theta / 2;
  }
  int jj = (j + shift) % s.n_theta;
  if (jj < 0) jj += s.n_theta;
  return s.values[static_cast<std::size_t>(i) * s.n_theta + static_cast<std::size_t>(jj)];
}

double sampled_radial(const Sampled& s, double theta, double phi) {
  const double dphi = kPi / (s.n_phi - 1);
  const double dtheta = kTwoPi / s.n_theta;
  const double u = phi / dphi;
  const double w = theta / dtheta;
  const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, s.n_phi - 2);
  const int j0 = static_cast<int>(std::floor(w));
  const double tu = u - i0;
  const double tw = w - j0;
  if (s.order >= 3) {
    double rows[4];
    for (int di = -1; di <= 2; ++di) {
      const int i = i0 + di;
      rows[di + 1] = catmull_rom(sampled_fetch(s, i, j0 - 1), sampled_fetch(s, i, j0),
                                 sampled_fetch(s, i, j0 + 1), sampled_fetch(s, i, j0 + 2), tw);
    }
    return catmull_rom(rows[0], rows[1], rows[2], rows[3], tu);
  }
  const double a = sampled_fetch(s, i0, j0) * (1 - tw) + sampled_fetch(s, i0, j0 + 1) * tw;
  const double b = sampled_fetch(s, i0 + 1, j0) * (1 - tw) + sampled_fetch(s, i0 + 1, j0 + 1) * tw;
  return a * (1 - tu) + b * tu;
}

UniformHermite revolution_interp(const Revolution& rev) {
  return UniformHermite(0.0, 0.5 * kPi, rev.profile);
}

double perturbation_at(const PerturbedBall& pb, std::span<const double> u) {
  int lmax = 0;
  for (const auto& c : pb.coeffs) lmax = std::max(lmax, c.l);
  const double z = std::clamp(u[2], -1.0, 1.0);
  const double theta = std::atan2(u[1], u[0]);
  const auto tbl = legendre_bar_table(lmax, z);
  const double sqrt2 = std::sqrt(2.0);
  double acc = 0.0;
  for (const auto& c : pb.coeffs) {
    const double pb_lm = tbl[static_cast<std::size_t>(c.l * (c.l + 1) / 2 + std::abs(c.m))];
    double y;
    if (c.m == 0)
      y = pb_lm;
    else if (c.m > 0)
      y = sqrt2 * pb_lm * std::cos(c.m * theta);
    else
      y = sqrt2 * pb_lm * std::sin(-c.m * theta);
    acc += c.c * y;
  }
  return acc;
}

void validate_variant(const BodyVariant& v) {
  std::visit(
      [](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          require(b.n >= 2, errc::invalid_parameter, "ball: n >= 2 required");
          require(b.r > 0.0, errc::invalid_parameter, "ball: r > 0 required");
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          require(b.semi_axes.size() >= 2, errc::invalid_parameter,
                  "ellipsoid: n >= 2 required");
          for (double a : b.semi_axes)
            require(a > 0.0, errc::invalid_parameter, "ellipsoid: semi-axes must be > 0");
        } else if constexpr (std::is_same_v<T, Box>) {
          require(b.half_sides.size() >= 2, errc::invalid_parameter, "box: n >= 2 required");
          for (double h : b.half_sides)
            require(h > 0.0, errc::invalid_parameter, "box: half-sides must be > 0");
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          require(b.n >= 2, errc::invalid_parameter, "cross_polytope: n >= 2 required");
          require(b.a > 0.0, errc::invalid_parameter, "cross_polytope: a > 0 required");
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          require(b.n >= 2, errc::invalid_parameter, "cylinder: n >= 2 required");
          require(b.r > 0.0 && b.half_height > 0.0, errc::invalid_parameter,
                  "cylinder: r > 0 and half_height > 0 required");
        } else if constexpr (std::is_same_v<T, Revolution>) {
          require(b.profile.size() >= 4, errc::invalid_parameter,
                  "revolution: profile needs >= 4 samples");
          for (double r : b.profile)
            require(r > 0.0 && std::isfinite(r), errc::invalid_parameter,
                    "revolution: profile values must be > 0");
        } else if constexpr (std::is_same_v<T, PerturbedBall>) {
          require(b.r0 > 0.0, errc::invalid_parameter, "perturbed_ball: r0 > 0 required");
          for (const auto& c : b.coeffs) {
            require(c.l >= 0 && std::abs(c.m) <= c.l, errc::invalid_parameter,
                    "perturbed_ball: coefficient indices need 0 <= |m| <= l");
            require(c.l % 2 == 0, errc::invalid_parameter,
                    "perturbed_ball: only even degrees keep the body centered");
            require(c.l <= 64, errc::invalid_parameter, "perturbed_ball: degree cap is 64");
          }
          // Radial positivity margin checked on a grid.
          const auto rule = sphere_rule(3, 24);
          for (std::size_t i = 0; i < rule.size(); ++i) {
            const double rho = b.r0 + b.amplitude * perturbation_at(b, rule.node(i));
            require(rho >= 0.1 * b.r0, errc::invalid_parameter,
                    "perturbed_ball: radial drops below 0.1*r0");
          }
        } else if constexpr (std::is_same_v<T, Sampled>) {
          require(b.n_phi >= 5, errc::invalid_parameter, "sampled: n_phi >= 5 required");
          require(b.n_theta >= 4 && b.n_theta % 2 == 0, errc::invalid_parameter,
                  "sampled: n_theta must be even and >= 4");
          require(b.order == 1 || b.order == 3, errc::invalid_parameter,
                  "sampled: interpolation order must be 1 or 3");
          require(b.values.size() ==
                      static_cast<std::size_t>(b.n_phi) * static_cast<std::size_t>(b.n_theta),
                  errc::invalid_parameter, "sampled: values size != n_phi * n_theta");
          double vmax = 0.0;
          for (double x : b.values) {
            require(std::isfinite(x) && x >= 0.0, errc::invalid_parameter,
                    "sampled: values must be finite and >= 0");
            vmax = std::max(vmax, x);
          }
          const double tol = kEvennessTol * std::max(1.0, vmax);
          for (int i = 0; i < b.n_phi; ++i) {
            for (int j = 0; j < b.n_theta; ++j) {
              const double a = b.values[static_cast<std::size_t>(i) * b.n_theta + j];
              const double anti =
                  b.values[static_cast<std::size_t>(b.n_phi - 1 - i) * b.n_theta +
                           (j + b.n_theta / 2) % b.n_theta];
              require(std::abs(a - anti) <= tol, errc::invalid_parameter,
                      "sampled: grid is not even (rho(u) != rho(-u))");
            }
          }
          // The pole rows must describe a single point each.
          for (int i : {0, b.n_phi - 1}) {
            const double v0 = b.values[static_cast<std::size_t>(i) * b.n_theta];
            for (int j = 1; j < b.n_theta; ++j)
              require(std::abs(b.values[static_cast<std::size_t>(i) * b.n_theta + j] - v0) <= tol,
                      errc::invalid_parameter, "sampled: pole row is not constant");
          }
        }
      },
      v);
}

}  // namespace

BodyDescriptor::BodyDescriptor(BodyVariant v) : v_(std::move(v)) {
  validate_variant(v_);
  dim_ = variant_dim(v_);
  smoothness_ = variant_smoothness(v_);
}

PoleFrame PoleFrame::standard(const Direction& pole) {
  auto basis = orthonormal_basis(pole);
  return PoleFrame{pole, std::move(basis[0]), std::move(basis[1])};
}

std::array<double, 3> PoleFrame::direction(double theta, double phi) const {
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i)
    v[static_cast<std::size_t>(i)] = cp * pole[i] + sp * (ct * t1[i] + st * t2[i]);
  return v;
}

double radial(const BodyDescriptor& K, std::span<const double> u) {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return b.r;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double q = 0.0;
          for (std::size_t i = 0; i < b.semi_axes.size(); ++i) {
            const double t = u[i] / b.semi_axes[i];
            q += t * t;
          }
          return 1.0 / std::sqrt(q);
        } else if constexpr (std::is_same_v<T, Box>) {
          double m = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < b.half_sides.size(); ++i)
            m = std::min(m, b.half_sides[i] / std::abs(u[i]));
          return m;
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          double s = 0.0;
          for (std::size_t i = 0; i < static_cast<std::size_t>(b.n); ++i) s += std::abs(u[i]);
          return b.a / s;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          double p2 = 0.0;
          for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(b.n); ++i) p2 += u[i] * u[i];
          const double rad = b.r / std::sqrt(p2);                       // inf-guarded
          const double ax = b.half_height / std::abs(u[b.n - 1]);      // inf-guarded
          return std::min(rad, ax);
        } else if constexpr (std::is_same_v<T, Revolution>) {
          const double phi_fold = std::acos(std::min(1.0, std::abs(u[2])));
          return revolution_interp(b)(phi_fold);
        } else if constexpr (std::is_same_v<T, PerturbedBall>) {
          return b.r0 + b.amplitude * perturbation_at(b, u);
        } else {  // Sampled
          const double phi = std::acos(std::clamp(u[2], -1.0, 1.0));
          double theta = std::atan2(u[1], u[0]);
          if (theta < 0.0) theta += kTwoPi;
          return sampled_radial(b, theta, phi);
        }
      },
      K.v());
}

double radial(const BodyDescriptor& K, const Direction& u) {
  require(u.dim() == K.dim(), errc::invalid_parameter, "radial: dimension mismatch");
  return radial(K, u.coords());
}

bool contains(const BodyDescriptor& K, std::span<const double> x) {
  require(static_cast<int>(x.size()) == K.dim(), errc::invalid_parameter,
          "contains: dimension mismatch");
  const double nrm = norm2(x);
  if (nrm < 1e-300) return true;
  std::vector<double> u(x.begin(), x.end());
  for (double& c : u) c /= nrm;
  return nrm <= radial(K, std::span<const double>(u));
}

bool smooth_gate(const BodyDescriptor& K) { return K.smoothness() >= Smoothness::c1; }

namespace {

double radial_dphi_central(const BodyDescriptor& K, const PoleFrame& frame, double theta,
                           double phi) {
  constexpr double delta = 1e-5;  // rad; balances truncation vs roundoff
  const auto vp = frame.direction(theta, phi + delta);
  const auto vm = frame.direction(theta, phi - delta);
  return (radial(K, std::span<const double>(vp)) - radial(K, std::span<const double>(vm))) /
         (2.0 * delta);
}

}  // namespace

double radial_dphi(const BodyDescriptor& K, const PoleFrame& frame, double theta, double phi) {
  require(phi >= -1e-12 && phi <= kPi + 1e-12, errc::invalid_parameter,
          "radial_dphi: phi must lie in [0, pi]");
  require(smooth_gate(K), errc::unsupported_body,
          "radial_dphi: body is not C1 (box/cross-polytope/cylinder and order-1 samples are "
          "rejected)");
  if (K.get_if<Ball>()) return 0.0;
  if (const auto* e = K.get_if<Ellipsoid>()) {
    const auto v = frame.direction(theta, phi);
    const double cp = std::cos(phi), sp = std::sin(phi);
    double q = 0.0, dq = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double dv = -sp * frame.pole[i] +
                        cp * (std::cos(theta) * frame.t1[i] + std::sin(theta) * frame.t2[i]);
      const double a2 = e->semi_axes[static_cast<std::size_t>(i)] *
                        e->semi_axes[static_cast<std::size_t>(i)];
      q += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)] / a2;
      dq += 2.0 * v[static_cast<std::size_t>(i)] * dv / a2;
    }
    return -0.5 * std::pow(q, -1.5) * dq;
  }
  if (const auto* rev = K.get_if<Revolution>()) {
    const auto v = frame.direction(theta, phi);
    const double z = std::clamp(v[2], -1.0, 1.0);
    const double sin_w = std::sqrt(std::max(0.0, 1.0 - z * z));
    if (sin_w < 1e-8) return radial_dphi_central(K, frame, theta, phi);
    const double dz = -std::sin(phi) * frame.pole[2] +
                      std::cos(phi) * (std::cos(theta) * frame.t1[2] + std::sin(theta) * frame.t2[2]);
    const double phi_w = std::acos(z);
    const auto interp = revolution_interp(*rev);
    // fold across the equator: rho = P(min(phi_w, pi - phi_w))
    const double dphiw_dphi = -dz / sin_w;
    if (phi_w <= 0.5 * kPi) return interp.derivative(phi_w) * dphiw_dphi;
    return -interp.derivative(kPi - phi_w) * dphiw_dphi;
  }
  return radial_dphi_central(K, frame, theta, phi);
}

ConvexityReport convexity_probe(const BodyDescriptor& K, int trials, std::uint64_t seed) {
  require(trials >= 1, errc::invalid_parameter, "convexity_probe: trials >= 1 required");
  const int n = K.dim();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto u = rng.unit_vector(n);
    const auto v = rng.unit_vector(n);
    const double ru = radial(K, std::span<const double>(u));
    const double rv = radial(K, std::span<const double>(v));
    std::vector<double> mid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      mid[static_cast<std::size_t>(i)] =
          0.5 * (ru * u[static_cast<std::size_t>(i)] + rv * v[static_cast<std::size_t>(i)]);
    const double nrm = norm2(mid);
    if (nrm < 1e-300) continue;
    std::vector<double> mdir(mid);
    for (double& c : mdir) c /= nrm;
    const double rm = radial(K, std::span<const double>(mdir));
    if (nrm > rm * (1.0 + kEvennessTol) + 1e-15) {
      ConvexityReport rep;
      rep.pass = false;
      rep.p.resize(static_cast<std::size_t>(n));
      rep.q.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        rep.p[static_cast<std::size_t>(i)] = ru * u[static_cast<std::size_t>(i)];
        rep.q[static_cast<std::size_t>(i)] = rv * v[static_cast<std::size_t>(i)];
      }
      return rep;
    }
  }
  return ConvexityReport{};
}

// ---- JSON ------------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(errc::parse_error, path + ": " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> req,
                std::initializer_list<const char*> opt = {}) {
  for (const char* k : req)
    if (!j.contains(k)) parse_fail(path + "." + k, "missing required field");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const bool known = std::any_of(req.begin(), req.end(), [&](const char* r) { return k == r; }) ||
                       std::any_of(opt.begin(), opt.end(), [&](const char* o) { return k == o; });
    if (!known) parse_fail(path + "." + k, "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) parse_fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> get_array(const json& j, const std::string& path, std::size_t min_len) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  if (out.size() < min_len)
    parse_fail(path, "expected at least " + std::to_string(min_len) + " entries");
  return out;
}

Smoothness smoothness_from_string(const std::string& s, const std::string& path) {
  if (s == "c0") return Smoothness::c0;
  if (s == "c1") return Smoothness::c1;
  if (s == "cinf") return Smoothness::cinf;
  parse_fail(path, "smoothness must be one of c0|c1|cinf");
}

const char* smoothness_to_string(Smoothness s) {
  switch (s) {
    case Smoothness::c0: return "c0";
    case Smoothness::c1: return "c1";
    case Smoothness::cinf: return "cinf";
  }
  return "c0";
}

}  // namespace

BodyDescriptor body_from_json(const nlohmann::json& j) {
  const std::string path = "$";
  if (!j.is_object()) parse_fail(path, "expected an object");
  if (!j.contains("type") || !j["type"].is_string()) parse_fail(path + ".type", "missing type tag");
  const std::string type = j["type"].get<std::string>();

  auto build = [&](BodyVariant v) -> BodyDescriptor {
    try {
      return BodyDescriptor(std::move(v));
    } catch (const Error& e) {
      if (e.code() == errc::invalid_parameter) parse_fail(path, e.what());
      throw;
    }
  };

  if (type == "ball") {
    check_keys(j, path, {"type", "n", "r"});
    const int n = get_int(j["n"], path + ".n");
    if (n < 2) parse_fail(path + ".n", "n >= 2 required");
    return build(Ball{n, get_number(j["r"], path + ".r")});
  }
  if (type == "ellipsoid") {
    check_keys(j, path, {"type", "semi_axes"});
    return build(Ellipsoid{get_array(j["semi_axes"], path + ".semi_axes", 2)});
  }
  if (type == "box") {
    check_keys(j, path, {"type", "n", "half_sides"});
    const int n = get_int(j["n"], path + ".n");
    auto hs = get_array(j["half_sides"], path + ".half_sides", 2);
    if (static_cast<int>(hs.size()) != n)
      parse_fail(path + ".half_sides", "length must equal n");
    return build(Box{std::move(hs)});
  }
  if (type == "cross_polytope") {
    check_keys(j, path, {"type", "n", "a"});
    return build(CrossPolytope{get_int(j["n"], path + ".n"), get_number(j["a"], path + ".a")});
  }
  if (type == "cylinder") {
    check_keys(j, path, {"type", "n", "r", "half_height"});
    return build(Cylinder{get_int(j["n"], path + ".n"), get_number(j["r"], path + ".r"),
                          get_number(j["half_height"], path + ".half_height")});
  }
  if (type == "revolution") {
    check_keys(j, path, {"type", "profile"}, {"smoothness"});
    Revolution rev;
    rev.profile = get_array(j["profile"], path + ".profile", 4);
    if (j.contains("smoothness")) {
      if (!j["smoothness"].is_string()) parse_fail(path + ".smoothness", "expected a string");
      rev.smoothness =
          smoothness_from_string(j["smoothness"].get<std::string>(), path + ".smoothness");
    }
    return build(std::move(rev));
  }
  if (type == "perturbed_ball") {
    check_keys(j, path, {"type", "r0", "coeffs"}, {"amplitude"});
    PerturbedBall pb;
    pb.r0 = get_number(j["r0"], path + ".r0");
    if (!j["coeffs"].is_array()) parse_fail(path + ".coeffs", "expected an array");
    for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
      const std::string cpath = path + ".coeffs[" + std::to_string(i) + "]";
      const json& cj = j["coeffs"][i];
      if (!cj.is_object()) parse_fail(cpath, "expected an object");
      check_keys(cj, cpath, {"l", "m", "c"});
      pb.coeffs.push_back(HarmCoeff{get_int(cj["l"], cpath + ".l"), get_int(cj["m"], cpath + ".m"),
                                    get_number(cj["c"], cpath + ".c")});
    }
    if (j.contains("amplitude")) pb.amplitude = get_number(j["amplitude"], path + ".amplitude");
    return build(std::move(pb));
  }
  if (type == "sampled") {
    check_keys(j, path, {"type", "n_phi", "n_theta", "values"}, {"order"});
    Sampled s;
    s.n_phi = get_int(j["n_phi"], path + ".n_phi");
    s.n_theta = get_int(j["n_theta"], path + ".n_theta");
    if (j.contains("order")) s.order = get_int(j["order"], path + ".order");
    s.values = get_array(j["values"], path + ".values", 1);
    return build(std::move(s));
  }
  parse_fail(path + ".type", "unknown body type '" + type + "'");
}

nlohmann::json body_to_json(const BodyDescriptor& K) {
  json j;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          j = {{"type", "ball"}, {"n", b.n}, {"r", b.r}};
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          j = {{"type", "ellipsoid"}, {"semi_axes", b.semi_axes}};
        } else if constexpr (std::is_same_v<T, Box>) {
          j = {{"type", "box"}, {"n", static_cast<int>(b.half_sides.size())},
               {"half_sides", b.half_sides}};
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          j = {{"type", "cross_polytope"}, {"n", b.n}, {"a", b.a}};
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          j = {{"type", "cylinder"}, {"n", b.n}, {"r", b.r}, {"half_height", b.half_height}};
        } else if constexpr (std::is_same_v<T, Revolution>) {
          j = {{"type", "revolution"}, {"profile", b.profile},
               {"smoothness", smoothness_to_string(b.smoothness)}};
        } else if constexpr (std::is_same_v<T, PerturbedBall>) {
          json coeffs = json::array();
          for (const auto& c : b.coeffs) coeffs.push_back({{"l", c.l}, {"m", c.m}, {"c", c.c}});
          j = {{"type", "perturbed_ball"}, {"r0", b.r0}, {"coeffs", coeffs},
               {"amplitude", b.amplitude}};
        } else {  // Sampled
          j = {{"type", "sampled"}, {"n_phi", b.n_phi}, {"n_theta", b.n_theta},
               {"order", b.order}, {"values", b.values}};
        }
      },
      K.v());
  return j;
}

BodyDescriptor parse_descriptor(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(errc::parse_error, std::string("$: invalid JSON (") + e.what() + ")");
  }
  return body_from_json(j);
}

std::string serialize(const BodyDescriptor& K) { return body_to_json(K).dump(); }

// ---- geometry helpers --------------------------------------------------------

double circumradius_bound(const BodyDescriptor& K) {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return b.r;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return *std::max_element(b.semi_axes.begin(), b.semi_axes.end());
        } else if constexpr (std::is_same_v<T, Box>) {
          double s = 0.0;
          for (double h : b.half_sides) s += h * h;
          return std::sqrt(s);
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          return b.a;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return std::sqrt(b.r * b.r + b.half_height * b.half_height);
        } else if constexpr (std::is_same_v<T, Revolution>) {
          double m = 0.0;
          for (double r : b.profile) m = std::max(m, r);
          return 1.5 * m;  // Hermite overshoot margin
        } else if constexpr (std::is_same_v<T, PerturbedBall>) {
          double amp = 0.0;
          for (const auto& c : b.coeffs)  // sup |Y_lm| <= sqrt((2l+1)/(2pi))
            amp += std::abs(c.c) * std::sqrt((2.0 * c.l + 1.0) / kTwoPi);
          return b.r0 + std::abs(b.amplitude) * amp;
        } else {
          double m = 0.0;
          for (double v : b.values) m = std::max(m, v);
          return 1.5 * m;
        }
      },
      K.v());
}

namespace {

// Deterministic ascent of a smooth function on S²: coarse grid scan, then
// shrinking tangent steps.
std::pair<Direction, double> argmax_on_sphere(
    const std::function<double(std::span<const double>)>& f, int coarse_res, int iters) {
  const auto rule = sphere_rule(3, coarse_res);
  std::size_t best = 0;
  double fbest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = f(rule.node(i));
    if (v > fbest) {
      fbest = v;
      best = i;
    }
  }
  std::vector<double> u(rule.node(best).begin(), rule.node(best).end());
  double step = 0.5;
  for (int it = 0; it < iters; ++it) {
    bool improved = false;
    const auto basis = orthonormal_basis(Direction(std::vector<double>(u)));
    for (const auto& t : basis) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> cand(u);
        for (int i = 0; i < 3; ++i)
          cand[static_cast<std::size_t>(i)] += sgn * step * t[static_cast<std::size_t>(i)];
        double nrm = norm2(cand);
        for (double& c : cand) c /= nrm;
        const double v = f(cand);
        if (v > fbest) {
          fbest = v;
          u = std::move(cand);
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-10) break;
    }
  }
  return {Direction(std::move(u)), fbest};
}

}  // namespace

double extent_along(const BodyDescriptor& K, const Direction& axis) {
  require(axis.dim() == K.dim(), errc::invalid_parameter, "extent_along: dimension mismatch");
  const auto u = axis.coords();
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return b.r;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double s = 0.0;
          for (std::size_t i = 0; i < b.semi_axes.size(); ++i) {
            const double t = b.semi_axes[i] * u[i];
            s += t * t;
          }
          return std::sqrt(s);
        } else if constexpr (std::is_same_v<T, Box>) {
          double s = 0.0;
          for (std::size_t i = 0; i < b.half_sides.size(); ++i) s += b.half_sides[i] * std::abs(u[i]);
          return s;
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          double m = 0.0;
          for (std::size_t i = 0; i < static_cast<std::size_t>(b.n); ++i)
            m = std::max(m, std::abs(u[i]));
          return b.a * m;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          double p2 = 0.0;
          for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(b.n); ++i) p2 += u[i] * u[i];
          return b.r * std::sqrt(p2) + b.half_height * std::abs(u[b.n - 1]);
        } else {
          (void)b;
          const auto [dir, val] = argmax_on_sphere(
              [&](std::span<const double> v) {
                return radial(K, v) * dot(v, u);
              },
              32, 60);
          (void)dir;
          return val;
        }
      },
      K.v());
}

std::vector<double> top_point(const BodyDescriptor& K, const Direction& axis) {
  require(axis.dim() == K.dim(), errc::invalid_parameter, "top_point: dimension mismatch");
  const auto u = axis.coords();
  const int n = K.dim();
  return std::visit(
      [&](const auto& b) -> std::vector<double> {
        using T = std::decay_t<decltype(b)>;
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        if constexpr (std::is_same_v<T, Ball>) {
          for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b.r * u[i];
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double h = 0.0;
          for (int i = 0; i < n; ++i) {
            const double t = b.semi_axes[static_cast<std::size_t>(i)] * u[i];
            h += t * t;
          }
          h = std::sqrt(h);
          for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = b.semi_axes[static_cast<std::size_t>(i)] *
                                             b.semi_axes[static_cast<std::size_t>(i)] * u[i] / h;
        } else if constexpr (std::is_same_v<T, Box>) {
          for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] =
                (u[i] >= 0.0 ? 1.0 : -1.0) * b.half_sides[static_cast<std::size_t>(i)];
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          int imax = 0;
          for (int i = 1; i < n; ++i)
            if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
          x[static_cast<std::size_t>(imax)] = (u[imax] >= 0.0 ? 1.0 : -1.0) * b.a;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          double p2 = 0.0;
          for (int i = 0; i + 1 < n; ++i) p2 += u[i] * u[i];
          const double pn = std::sqrt(p2);
          if (pn > 1e-14)
            for (int i = 0; i + 1 < n; ++i) x[static_cast<std::size_t>(i)] = b.r * u[i] / pn;
          x[static_cast<std::size_t>(n - 1)] = (u[n - 1] >= 0.0 ? 1.0 : -1.0) * b.half_height;
        } else {
          (void)b;
          const auto [dir, val] = argmax_on_sphere(
              [&](std::span<const double> v) { return radial(K, v) * dot(v, u); }, 32, 60);
          const double r = radial(K, dir.coords());
          for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
        }
        return x;
      },
      K.v());
}

BodyDescriptor scaled(const BodyDescriptor& K, double s) {
  require(s > 0.0, errc::invalid_parameter, "scaled: s > 0 required");
  return std::visit(
      [&](const auto& b) -> BodyDescriptor {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return BodyDescriptor(Ball{b.n, s * b.r});
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          Ellipsoid e = b;
          for (double& a : e.semi_axes) a *= s;
          return BodyDescriptor(std::move(e));
        } else if constexpr (std::is_same_v<T, Box>) {
          Box bx = b;
          for (double& h : bx.half_sides) h *= s;
          return BodyDescriptor(std::move(bx));
        } else if constexpr (std::is_same_v<T, CrossPolytope>) {
          return BodyDescriptor(CrossPolytope{b.n, s * b.a});
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return BodyDescriptor(Cylinder{b.n, s * b.r, s * b.half_height});
        } else if constexpr (std::is_same_v<T, Revolution>) {
          Revolution r = b;
          for (double& v : r.profile) v *= s;
          return BodyDescriptor(std::move(r));
        } else if constexpr (std::is_same_v<T, PerturbedBall>) {
          PerturbedBall p = b;
          p.r0 *= s;
          p.amplitude *= s;
          return BodyDescriptor(std::move(p));
        } else {
          Sampled sm = b;
          for (double& v : sm.values) v *= s;
          return BodyDescriptor(std::move(sm));
        }
      },
      K.v());
}

}  // namespace geotom
