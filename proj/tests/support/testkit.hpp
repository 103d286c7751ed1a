#pragma once

// Hand-rolled generators and brute-force oracles shared by the test suites.
// Oracles here deliberately avoid the library's kernels: plain loops,
// std::polar per term, bisection instead of alternating projections.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "curvereg/matrix.hpp"
#include "curvereg/spectral.hpp"

namespace testkit {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Complex complex_normal() { return {normal(), normal()}; }

  std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  /// Random Hermitian-consistent spectral panel with coefficient decay.
  curvereg::SpectralPanel spectral_panel(std::size_t big_n, std::size_t curves,
                                         curvereg::Parity parity = curvereg::Parity::Even) {
    curvereg::ComplexMatrix c(big_n, curves);
    const auto half = static_cast<int>(big_n / 2);
    for (std::size_t j = 0; j < curves; ++j) {
      for (int k = 0; k < half; ++k) {
        const double scale = 1.0 / (1.0 + k);
        Complex z = complex_normal() * scale;
        if (k == 0) z = z.real();
        c(static_cast<std::size_t>(half + k), j) = z;
        if (k > 0) c(static_cast<std::size_t>(half - k), j) = std::conj(z);
      }
      c(0, j) = normal() / (1.0 + half);  // k = -N/2 has no partner
    }
    return curvereg::SpectralPanel(std::move(c), parity);
  }

  /// Random conjugate-symmetric estimate with cutoff m.
  curvereg::MeanEstimate mean_estimate(int m) {
    std::vector<Complex> nonneg(static_cast<std::size_t>(m + 1));
    nonneg[0] = normal();
    for (int k = 1; k <= m; ++k) nonneg[static_cast<std::size_t>(k)] = complex_normal() / (1.0 + k);
    return curvereg::MeanEstimate::from_nonnegative(nonneg);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// (1/N) sum_q y_q exp(-i 2 pi k t_q), one term at a time.
inline Complex direct_coefficient(std::span<const double> y, std::span<const double> t, int k) {
  Complex sum = 0.0;
  for (std::size_t q = 0; q < y.size(); ++q) sum += y[q] * std::polar(1.0, -kTwoPi * k * t[q]);
  return sum / static_cast<double>(y.size());
}

/// Alignment criterion straight from its definition.
inline double criterion_direct(const curvereg::SpectralPanel& spec, std::span<const double> theta,
                               int k0) {
  const std::size_t curves = spec.curves();
  double total = 0.0;
  for (int k = -k0; k <= k0; ++k) {
    std::vector<Complex> a(curves);
    Complex mean = 0.0;
    for (std::size_t j = 0; j < curves; ++j) {
      a[j] = spec(k, j) * std::polar(1.0, kTwoPi * k * theta[j]);
      mean += a[j];
    }
    mean /= static_cast<double>(curves);
    for (const auto& z : a) total += std::norm(z - mean);
  }
  return total / static_cast<double>(curves);
}

/// Projection onto box [-h, h]^J cut by sum = 0: x_i = clamp(raw_i - lambda),
/// lambda found by bisection on the monotone sum.
inline std::vector<double> projection_oracle(std::span<const double> raw, double kappa) {
  const double h = kappa / 2.0;
  auto total = [&](double lambda) {
    double s = 0.0;
    for (double r : raw) s += std::clamp(r - lambda, -h, h);
    return s;
  };
  double lo = *std::min_element(raw.begin(), raw.end()) - h - 1.0;
  double hi = *std::max_element(raw.begin(), raw.end()) + h + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 0.0 ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = std::clamp(raw[i] - lambda, -h, h);
  return out;
}

/// sum_k |a_k exp(-i 2 pi k theta) - b_k|^2 with zero padding.
inline double shifted_distance_sq(const curvereg::MeanEstimate& a, const curvereg::MeanEstimate& b,
                                  double theta) {
  const int reach = std::max(a.cutoff(), b.cutoff());
  double s = 0.0;
  for (int k = -reach; k <= reach; ++k)
    s += std::norm(a.coeff(k) * std::polar(1.0, -kTwoPi * k * theta) - b.coeff(k));
  return s;
}

/// Exhaustive minimum of the shifted distance over `points` equispaced shifts.
inline double dense_orbit_distance(const curvereg::MeanEstimate& a,
                                   const curvereg::MeanEstimate& b, std::size_t points) {
  const int reach = std::max(a.cutoff(), b.cutoff());
  double best = INFINITY;
  for (std::size_t g = 0; g < points; ++g) {
    const double theta = -0.5 + static_cast<double>(g) / static_cast<double>(points);
    const Complex step = std::polar(1.0, -kTwoPi * theta);
    Complex rot = std::pow(step, -reach);
    double s = 0.0;
    for (int k = -reach; k <= reach; ++k) {
      s += std::norm(a.coeff(k) * rot - b.coeff(k));
      rot *= step;
    }
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace testkit
