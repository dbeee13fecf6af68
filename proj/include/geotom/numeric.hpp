#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "geotom/common.hpp"

namespace geotom {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_surface_measure(int n);

/// kappa_n = pi^{n/2} / Gamma(n/2 + 1), the volume of the unit n-ball.
double unit_ball_volume(int n);

struct GaussLegendre {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum = 2 (rescaled to be exact)
};

/// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussLegendre gauss_legendre(int n);

/// P_l(0) by the recurrence P_l(0) = -(l-1)/l * P_{l-2}(0); 0 for odd l.
double legendre_at_zero(int l);

/// Clenshaw–Curtis weights for the Chebyshev–Lobatto points
/// x_k = -cos(pi k / (n-1)), k = 0..n-1, on [-1, 1].
std::vector<double> clenshaw_curtis_weights(int n);

/// splitmix64; used to derive independent per-index seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic RNG: mt19937_64 with hand-rolled float conversion and
/// Box–Muller normals, so streams are pinned bit-for-bit by the seed alone.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {  // in (0, 1)
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  /// Uniform unit vector in R^n (isotropic Gaussian, normalized).
  std::vector<double> unit_vector(int n) {
    std::vector<double> v(n);
    double nrm2 = 0.0;
    do {
      nrm2 = 0.0;
      for (auto& x : v) {
        x = normal();
        nrm2 += x * x;
      }
    } while (nrm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(nrm2);
    for (auto& x : v) x *= inv;
    return v;
  }

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Monotone (Fritsch–Carlson) cubic Hermite interpolant. C^1, shape
/// preserving; used for symmetral profiles where plain splines oscillate.
class Pchip {
public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

private:
  std::size_t interval(double x) const;
  std::vector<double> x_, y_, d_;  // d_ = node derivatives
};

/// Cubic Hermite on a uniform grid with prescribed zero end slopes
/// (even-extension boundary): interior derivatives by central differences.
class UniformHermite {
public:
  UniformHermite() = default;
  UniformHermite(double x0, double x1, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  std::size_t size() const { return y_.size(); }
  const std::vector<double>& values() const { return y_; }
  double x0() const { return x0_; }
  double x1() const { return x1_; }

private:
  double x0_ = 0.0, x1_ = 1.0, h_ = 1.0;
  std::vector<double> y_, d_;
};

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace geotom
