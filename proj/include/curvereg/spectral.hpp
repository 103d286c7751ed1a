#pragma once

// Even/odd data splitting, empirical Fourier coefficients, truncated
// reconstruction and the distance between shift orbits.

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "curvereg/matrix.hpp"
#include "curvereg/signal.hpp"

namespace curvereg {

using Complex = std::complex<double>;
using ComplexMatrix = ColumnMatrix<Complex>;

enum class Parity { Even = 0, Odd = 1 };

/// Half of a panel's rows: Even holds Y_{2q}, Odd holds Y_{2q-1}, q = 1..N.
class HalfPanel {
 public:
  HalfPanel(RealMatrix samples, Parity parity);

  std::size_t half_size() const noexcept { return samples_.rows(); }
  std::size_t curves() const noexcept { return samples_.cols(); }
  Parity parity() const noexcept { return parity_; }
  const RealMatrix& samples() const noexcept { return samples_; }
  /// t_q for row q - 1: q / N for Even, q / N - 1 / (2N) for Odd.
  double design(std::size_t row) const noexcept;

 private:
  RealMatrix samples_;
  Parity parity_;
};

/// Returns (Even, Odd).
std::pair<HalfPanel, HalfPanel> split_samples(const CurvePanel& panel);

/// Inverse of split_samples: interleaves the two halves back into n rows.
RealMatrix merge_halves(const HalfPanel& even, const HalfPanel& odd);

/// Per-curve coefficients c_hat[k, j] for -N/2 <= k < N/2.
class SpectralPanel {
 public:
  SpectralPanel(ComplexMatrix coeffs, Parity parity);

  std::size_t half_size() const noexcept { return coeffs_.rows(); }
  std::size_t curves() const noexcept { return coeffs_.cols(); }
  Parity parity() const noexcept { return parity_; }
  int min_frequency() const noexcept { return -static_cast<int>(half_size() / 2); }
  int max_frequency() const noexcept { return static_cast<int>(half_size() / 2) - 1; }

  /// Coefficient for frequency k in [min_frequency, max_frequency].
  const Complex& operator()(int k, std::size_t j) const noexcept {
    return coeffs_(static_cast<std::size_t>(k - min_frequency()), j);
  }
  const Complex& at(int k, std::size_t j) const;
  const ComplexMatrix& raw() const noexcept { return coeffs_; }

 private:
  ComplexMatrix coeffs_;
  Parity parity_;
};

/// c_hat[k, j] = (1/N) sum_q Y[q, j] exp(-i 2 pi k t_q). Frequencies 0..N/2
/// come from the vectorized phasor kernel (the odd half carries the
/// exp(i pi k / N) grid-offset phase); negative ones by conjugation.
SpectralPanel empirical_coefficients(const HalfPanel& half);

/// Real-valued trigonometric polynomial sum_{|k|<=m} c_k exp(i 2 pi k t).
class MeanEstimate {
 public:
  /// `coeffs` holds c_{-m}..c_m (odd length). Conjugate symmetry is an
  /// invariant of the type and is checked to round-off.
  explicit MeanEstimate(std::vector<Complex> coeffs);
  /// Builds c_{-m}..c_m from c_0..c_m, setting c_{-k} = conj c_k.
  static MeanEstimate from_nonnegative(std::span<const Complex> nonneg);

  int cutoff() const noexcept { return static_cast<int>(coeffs_.size() / 2); }
  /// c_k, zero outside the band.
  Complex coeff(int k) const noexcept;
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }

  /// Coefficients of t -> estimate(t - tau).
  MeanEstimate shifted(double tau) const;
  MeanEstimate truncated(int m) const;

  friend bool operator==(const MeanEstimate&, const MeanEstimate&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// True when c_{-k} = conj c_k within `tol` relative to the largest entry.
bool is_conjugate_symmetric(std::span<const Complex> centered, double tol = 1e-12);

std::vector<double> reconstruct(const MeanEstimate& est, std::span<const double> grid);

struct OrbitDistance {
  double distance = 0.0;
  /// Minimizer theta in [-1/2, 1/2) of sum_k |a_k e^{-i 2 pi k theta} - b_k|^2.
  double shift = 0.0;
};

inline constexpr std::size_t kOrbitGrid = 4096;

/// d([a], [b]) = min_theta ||a(. - theta) - b||_2 via Parseval: coarse search
/// over kOrbitGrid shifts, then golden-section refinement of the best few
/// grid minima.
OrbitDistance orbit_distance(const MeanEstimate& a, const MeanEstimate& b);

/// Squared orbit distance objective at a single theta, evaluated term by
/// term (no cancellation).
double shifted_squared_distance(const MeanEstimate& a, const MeanEstimate& b,
                                double theta);

}  // namespace curvereg
