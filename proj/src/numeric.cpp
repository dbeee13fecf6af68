#include "geotom/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace geotom {

double sphere_surface_measure(int n) {
  require(n >= 1, errc::invalid_parameter, "sphere_surface_measure: n >= 1 required");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) {
  require(n >= 1, errc::invalid_parameter, "unit_ball_volume: n >= 1 required");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

GaussLegendre gauss_legendre(int n) {
  require(n >= 1, errc::invalid_parameter, "gauss_legendre: n >= 1 required");
  GaussLegendre gl;
  gl.nodes.assign(n, 0.0);
  gl.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(x), derivative from P_n and P_{n-1}
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int l = 2; l <= n; ++l) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;  // ascending order: the guesses start near +1
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  // Rescale so the weight sum is the exact measure of [-1, 1].
  double s = 0.0;
  for (double w : gl.weights) s += w;
  const double fix = 2.0 / s;
  for (double& w : gl.weights) w *= fix;
  return gl;
}

double legendre_at_zero(int l) {
  require(l >= 0, errc::invalid_parameter, "legendre_at_zero: l >= 0 required");
  if (l % 2 == 1) return 0.0;
  double p = 1.0;  // P_0(0)
  for (int k = 2; k <= l; k += 2) p *= -(k - 1.0) / k;
  return p;
}

std::vector<double> clenshaw_curtis_weights(int n) {
  require(n >= 2 && n % 2 == 1, errc::invalid_parameter,
          "clenshaw_curtis_weights: odd n >= 3 required");
  const int m = n - 1;
  std::vector<double> w(n, 0.0);
  for (int k = 0; k <= m; ++k) {
    double s = 1.0;
    for (int j = 1; j <= m / 2; ++j) {
      const double b = (2 * j == m) ? 1.0 : 2.0;
      s -= b * std::cos(2.0 * j * k * kPi / m) / (4.0 * j * j - 1.0);
    }
    w[k] = (k == 0 || k == m) ? s / m : 2.0 * s / m;
  }
  return w;
}

// ---- Pchip ----------------------------------------------------------------

namespace {

// First-derivative weight at x0 from a 5-point stencil (Fornberg).
double stencil_derivative(const double* x, const double* y, std::size_t n, double x0) {
  // Derivative of the Lagrange interpolant: sum_j y_j L_j'(x0).
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double dsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      double prod = 1.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == j || l == k) continue;
        prod *= (x0 - x[l]) / (x[j] - x[l]);
      }
      dsum += prod / (x[j] - x[k]);
    }
    acc += y[j] * dsum;
  }
  return acc;
}

}  // namespace

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  require(n >= 2 && y_.size() == n, errc::invalid_parameter, "Pchip: need >= 2 matching samples");
  d_.assign(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    require(h[k] > 0.0, errc::invalid_parameter, "Pchip: x not strictly increasing");
    delta[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  // Node derivatives from 5-point (4th-order) stencils, clamped by the
  // Fritsch–Carlson monotonicity safeguard so smooth data gets high-order
  // accuracy while kinked data cannot oscillate.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k < 2 ? 0 : (k + 3 > n ? n - 5 : k - 2);
    const std::size_t m = std::min<std::size_t>(5, n);
    const std::size_t start = std::min(lo, n - m);
    double d = stencil_derivative(x_.data() + start, y_.data() + start, m, x_[k]);
    const double dl = k > 0 ? delta[k - 1] : delta[k];
    const double dr = k + 1 < n ? delta[k] : delta[k - 1];
    if (k > 0 && k + 1 < n && delta[k - 1] * delta[k] <= 0.0) {
      d = 0.0;
    } else {
      const double cap = 3.0 * std::min(std::abs(dl), std::abs(dr));
      const double ref = std::abs(dl) >= std::abs(dr) ? dr : dl;
      if (d * ref < 0.0)
        d = 0.0;
      else if (std::abs(d) > cap)
        d = (d >= 0.0 ? cap : -cap);
    }
    d_[k] = d;
  }
}

std::size_t Pchip::interval(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = static_cast<std::size_t>(std::distance(x_.begin(), it));
  if (k == 0) return 0;
  if (k >= x_.size()) return x_.size() - 2;
  return k - 1;
}

double Pchip::operator()(double x) const {
  const std::size_t k = interval(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[k] + h * h10 * d_[k] + h01 * y_[k + 1] + h * h11 * d_[k + 1];
}

double Pchip::derivative(double x) const {
  const std::size_t k = interval(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h, dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h, dh11 = 3 * t2 - 2 * t;
  return dh00 * y_[k] + dh10 * d_[k] + dh01 * y_[k + 1] + dh11 * d_[k + 1];
}

// ---- UniformHermite --------------------------------------------------------

UniformHermite::UniformHermite(double x0, double x1, std::vector<double> y)
    : x0_(x0), x1_(x1), y_(std::move(y)) {
  const std::size_t n = y_.size();
  require(n >= 4 && x1_ > x0_, errc::invalid_parameter, "UniformHermite: need >= 4 samples");
  h_ = (x1_ - x0_) / static_cast<double>(n - 1);
  d_.assign(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) d_[k] = (y_[k + 1] - y_[k - 1]) / (2.0 * h_);
  // Even-extension boundary: zero slope at both ends.
  d_[0] = 0.0;
  d_[n - 1] = 0.0;
}

double UniformHermite::operator()(double x) const {
  const std::size_t n = y_.size();
  double u = (x - x0_) / h_;
  if (u <= 0.0) return y_.front();
  if (u >= static_cast<double>(n - 1)) return y_.back();
  const std::size_t k = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(k);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[k] + h_ * h10 * d_[k] + h01 * y_[k + 1] + h_ * h11 * d_[k + 1];
}

double UniformHermite::derivative(double x) const {
  const std::size_t n = y_.size();
  double u = (x - x0_) / h_;
  if (u <= 0.0 || u >= static_cast<double>(n - 1)) return 0.0;
  const std::size_t k = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(k);
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h_, dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h_, dh11 = 3 * t2 - 2 * t;
  return dh00 * y_[k] + dh10 * d_[k] + dh01 * y_[k + 1] + dh11 * d_[k + 1];
}

}  // namespace geotom
