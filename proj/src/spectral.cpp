#include "curvereg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "curvereg/simd.hpp"

namespace curvereg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGoldenSectionTol = 1e-10;
constexpr std::size_t kRefinedMinima = 4;

double wrap_half(double theta) noexcept {
  return theta - std::floor(theta + 0.5);
}

}  // namespace

HalfPanel::HalfPanel(RealMatrix samples, Parity parity)
    : samples_(std::move(samples)), parity_(parity) {
  if (samples_.rows() < 2) throw std::invalid_argument("half panel: N must be >= 2");
}

double HalfPanel::design(std::size_t row) const noexcept {
  const double big_n = static_cast<double>(half_size());
  const double t = static_cast<double>(row + 1) / big_n;
  return parity_ == Parity::Even ? t : t - 0.5 / big_n;
}

std::pair<HalfPanel, HalfPanel> split_samples(const CurvePanel& panel) {
  const std::size_t n = panel.n();
  if (n % 2 != 0) throw std::invalid_argument("split_samples: n must be even");
  const std::size_t half = n / 2;
  RealMatrix even(half, panel.curves());
  RealMatrix odd(half, panel.curves());
  // Row i of the panel holds t_{i+1}: t_{2q} is row 2q - 1, t_{2q-1} is row 2q - 2.
  for (std::size_t j = 0; j < panel.curves(); ++j) {
    for (std::size_t r = 0; r < half; ++r) {
      even(r, j) = panel.samples()(2 * r + 1, j);
      odd(r, j) = panel.samples()(2 * r, j);
    }
  }
  return {HalfPanel(std::move(even), Parity::Even), HalfPanel(std::move(odd), Parity::Odd)};
}

RealMatrix merge_halves(const HalfPanel& even, const HalfPanel& odd) {
  if (even.parity() != Parity::Even || odd.parity() != Parity::Odd)
    throw std::invalid_argument("merge_halves: expected (Even, Odd)");
  if (even.half_size() != odd.half_size() || even.curves() != odd.curves())
    throw std::invalid_argument("merge_halves: shape mismatch");
  RealMatrix out(2 * even.half_size(), even.curves());
  for (std::size_t j = 0; j < even.curves(); ++j) {
    for (std::size_t r = 0; r < even.half_size(); ++r) {
      out(2 * r + 1, j) = even.samples()(r, j);
      out(2 * r, j) = odd.samples()(r, j);
    }
  }
  return out;
}

SpectralPanel::SpectralPanel(ComplexMatrix coeffs, Parity parity)
    : coeffs_(std::move(coeffs)), parity_(parity) {
  if (coeffs_.rows() < 2 || coeffs_.rows() % 2 != 0)
    throw std::invalid_argument("spectral panel: N must be even and >= 2");
}

const Complex& SpectralPanel::at(int k, std::size_t j) const {
  if (k < min_frequency() || k > max_frequency() || j >= curves())
    throw std::out_of_range("SpectralPanel::at");
  return (*this)(k, j);
}

SpectralPanel empirical_coefficients(const HalfPanel& half) {
  const std::size_t big_n = half.half_size();
  if (big_n < 2 || big_n % 2 != 0)
    throw std::invalid_argument("empirical_coefficients: N must be even and >= 2");
  const std::size_t nonneg = big_n / 2 + 1;  // k = 0..N/2
  const double inv_n = 1.0 / static_cast<double>(big_n);
  const double first_node = half.design(0);

  // Sum over r of Y_r exp(-i 2 pi k r / N), then rotate by exp(-i 2 pi k t_1).
  std::vector<double> x(nonneg);
  std::vector<Complex> phase(nonneg);
  for (std::size_t k = 0; k < nonneg; ++k) {
    x[k] = -static_cast<double>(k) * inv_n;
    phase[k] = std::polar(inv_n, -kTwoPi * static_cast<double>(k) * first_node);
  }

  ComplexMatrix coeffs(big_n, half.curves());
  const std::vector<double> zeros(big_n, 0.0);
  std::vector<double> out_re(nonneg), out_im(nonneg);
  const auto offset = static_cast<std::ptrdiff_t>(big_n / 2);
  for (std::size_t j = 0; j < half.curves(); ++j) {
    simd::phasor_sum(half.samples().column(j), zeros, x, out_re, out_im);
    for (std::size_t k = 0; k < nonneg; ++k) {
      const Complex c = Complex(out_re[k], out_im[k]) * phase[k];
      const auto kk = static_cast<std::ptrdiff_t>(k);
      if (kk < offset) coeffs(static_cast<std::size_t>(offset + kk), j) = c;
      if (kk > 0) coeffs(static_cast<std::size_t>(offset - kk), j) = std::conj(c);
    }
  }
  return SpectralPanel(std::move(coeffs), half.parity());
}

bool is_conjugate_symmetric(std::span<const Complex> centered, double tol) {
  if (centered.size() % 2 == 0) return false;
  const std::size_t m = centered.size() / 2;
  double scale = 0.0;
  for (const auto& c : centered) scale = std::max(scale, std::abs(c));
  const double bound = tol * std::max(scale, 1.0);
  for (std::size_t k = 0; k <= m; ++k)
    if (std::abs(centered[m - k] - std::conj(centered[m + k])) > bound) return false;
  return true;
}

MeanEstimate::MeanEstimate(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 == 0)
    throw std::invalid_argument("mean estimate: need coefficients c_{-m}..c_m");
  if (!is_conjugate_symmetric(coeffs_))
    throw std::invalid_argument("mean estimate: coefficients are not conjugate-symmetric");
}

MeanEstimate MeanEstimate::from_nonnegative(std::span<const Complex> nonneg) {
  if (nonneg.empty()) throw std::invalid_argument("mean estimate: empty coefficients");
  const std::size_t m = nonneg.size() - 1;
  std::vector<Complex> full(2 * m + 1);
  full[m] = nonneg[0].real();
  for (std::size_t k = 1; k <= m; ++k) {
    full[m + k] = nonneg[k];
    full[m - k] = std::conj(nonneg[k]);
  }
  return MeanEstimate(std::move(full));
}

Complex MeanEstimate::coeff(int k) const noexcept {
  const int m = cutoff();
  if (k < -m || k > m) return {};
  return coeffs_[static_cast<std::size_t>(k + m)];
}

MeanEstimate MeanEstimate::shifted(double tau) const {
  const int m = cutoff();
  std::vector<Complex> out(coeffs_.size());
  for (int k = -m; k <= m; ++k)
    out[static_cast<std::size_t>(k + m)] =
        coeff(k) * std::polar(1.0, -kTwoPi * static_cast<double>(k) * tau);
  return MeanEstimate(std::move(out));
}

MeanEstimate MeanEstimate::truncated(int m) const {
  if (m < 0) throw std::invalid_argument("truncated: negative cutoff");
  std::vector<Complex> out(static_cast<std::size_t>(2 * m + 1));
  for (int k = -m; k <= m; ++k) out[static_cast<std::size_t>(k + m)] = coeff(k);
  return MeanEstimate(std::move(out));
}

std::vector<double> reconstruct(const MeanEstimate& est, std::span<const double> grid) {
  const int m = est.cutoff();
  // Real form: c_0 + 2 Re sum_{k>=1} c_k exp(i 2 pi k t).
  std::vector<double> w_re(static_cast<std::size_t>(m + 1)), w_im(w_re.size());
  w_re[0] = est.coeff(0).real();
  for (int k = 1; k <= m; ++k) {
    w_re[static_cast<std::size_t>(k)] = 2.0 * est.coeff(k).real();
    w_im[static_cast<std::size_t>(k)] = 2.0 * est.coeff(k).imag();
  }
  std::vector<double> out(grid.size()), out_im(grid.size());
  simd::phasor_sum(w_re, w_im, grid, out, out_im);
  return out;
}

double shifted_squared_distance(const MeanEstimate& a, const MeanEstimate& b,
                                double theta) {
  const int overlap = std::min(a.cutoff(), b.cutoff());
  const int reach = std::max(a.cutoff(), b.cutoff());
  double sum = 0.0;
  for (int k = -reach; k <= reach; ++k) {
    if (k < -overlap || k > overlap) {
      sum += std::norm(a.coeff(k)) + std::norm(b.coeff(k));
      continue;
    }
    const Complex rotated = a.coeff(k) * std::polar(1.0, -kTwoPi * k * theta);
    sum += std::norm(rotated - b.coeff(k));
  }
  return sum;
}

OrbitDistance orbit_distance(const MeanEstimate& a, const MeanEstimate& b) {
  const int overlap = std::min(a.cutoff(), b.cutoff());

  // Cross term Re sum_k a_k conj(b_k) e^{-i 2 pi k theta} on the coarse grid;
  // the remaining terms do not depend on theta.
  std::vector<double> w_re(static_cast<std::size_t>(overlap + 1));
  std::vector<double> w_im(w_re.size());
  for (int k = 0; k <= overlap; ++k) {
    const Complex w = a.coeff(k) * std::conj(b.coeff(k)) * (k == 0 ? 1.0 : 2.0);
    w_re[static_cast<std::size_t>(k)] = w.real();
    w_im[static_cast<std::size_t>(k)] = w.imag();
  }
  std::vector<double> thetas(kOrbitGrid), neg(kOrbitGrid);
  for (std::size_t g = 0; g < kOrbitGrid; ++g) {
    thetas[g] = -0.5 + static_cast<double>(g) / static_cast<double>(kOrbitGrid);
    neg[g] = -thetas[g];
  }
  std::vector<double> cross(kOrbitGrid), cross_im(kOrbitGrid);
  simd::phasor_sum(w_re, w_im, neg, cross, cross_im);

  // Local maxima of the cross term are local minima of the distance.
  std::vector<std::size_t> candidates;
  for (std::size_t g = 0; g < kOrbitGrid; ++g) {
    const double prev = cross[(g + kOrbitGrid - 1) % kOrbitGrid];
    const double next = cross[(g + 1) % kOrbitGrid];
    if (cross[g] >= prev && cross[g] >= next) candidates.push_back(g);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&cross](std::size_t l, std::size_t r) {
              return cross[l] > cross[r] || (cross[l] == cross[r] && l < r);
            });
  if (candidates.size() > kRefinedMinima) candidates.resize(kRefinedMinima);

  const double cell = 1.0 / static_cast<double>(kOrbitGrid);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  OrbitDistance best{std::numeric_limits<double>::infinity(), 0.0};
  double best_sq = std::numeric_limits<double>::infinity();
  for (const std::size_t g : candidates) {
    double lo = thetas[g] - cell;
    double hi = thetas[g] + cell;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = shifted_squared_distance(a, b, x1);
    double f2 = shifted_squared_distance(a, b, x2);
    while (hi - lo > kGoldenSectionTol) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = shifted_squared_distance(a, b, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = shifted_squared_distance(a, b, x2);
      }
    }
    // The grid node itself guards against a flat bracket.
    for (const double theta : {0.5 * (lo + hi), thetas[g]}) {
      const double sq = shifted_squared_distance(a, b, theta);
      if (sq < best_sq) {
        best_sq = sq;
        best.shift = wrap_half(theta);
      }
    }
  }
  best.distance = std::sqrt(std::max(best_sq, 0.0));
  return best;
}

}  // namespace curvereg
