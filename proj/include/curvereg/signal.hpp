#pragma once

// Ground-truth test functions, noise calibration and simulation of the
// randomly shifted curves model
//
//   Y[l, j] = f(t_l - theta_j) + eps[l, j],   t_l = l / n,  l = 1..n.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvereg/matrix.hpp"

namespace curvereg {

class Rng;

/// Number of midpoint nodes used by every quadrature over [0, 1).
inline constexpr std::size_t kQuadratureNodes = std::size_t{1} << 14;

enum class FunctionKind { MixtGauss, HeaviSine, UserFourier };

std::string_view to_string(FunctionKind kind) noexcept;

/// Smoothness bookkeeping for rate checks; not used by any estimator.
struct SobolevMeta {
  double smoothness = 0.0;
  double radius = 0.0;
};

/// A 1-periodic mean pattern.
///
/// Parameter layouts:
///  - MixtGauss: flat (amplitude, center, width) triples, each bump periodized
///    over the integer translates -2..2.
///  - HeaviSine: (amplitude, jump_1, jump_2) for
///    amplitude * sin(4 pi t) - sgn(t - jump_1) - sgn(jump_2 - t) on [0, 1).
///  - UserFourier: (c0, Re c1, Im c1, Re c2, Im c2, ...), i.e. the series
///    c0 + 2 Re sum_{k>=1} c_k exp(i 2 pi k t). c0 is real.
class TestFunction {
 public:
  static TestFunction mixt_gauss();
  static TestFunction mixt_gauss(std::vector<double> triples);
  static TestFunction heavi_sine();
  static TestFunction user_fourier(std::span<const std::complex<double>> nonneg_coeffs);
  /// "mixtgauss" or "heavisine".
  static TestFunction from_name(std::string_view name);

  FunctionKind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  const std::optional<SobolevMeta>& sobolev() const noexcept { return sobolev_; }
  TestFunction with_sobolev(SobolevMeta meta) const;

  /// Scales every value by `factor` (parameters are updated accordingly).
  TestFunction scaled(double factor) const;

  double operator()(double t) const;
  /// Analytic derivative; throws std::domain_error for HeaviSine.
  double derivative(double t) const;
  bool has_jumps() const noexcept { return kind_ == FunctionKind::HeaviSine; }

  /// Exact Fourier coefficients c_0..c_kmax, only for UserFourier.
  std::optional<std::vector<std::complex<double>>> exact_coefficients(
      std::size_t kmax) const;

  friend bool operator==(const TestFunction&, const TestFunction&) = default;

 private:
  TestFunction(FunctionKind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}

  FunctionKind kind_ = FunctionKind::MixtGauss;
  std::vector<double> params_;
  std::optional<SobolevMeta> sobolev_;
};

double eval_test_function(const TestFunction& f, double t);

/// Midpoint rule on `nodes` points of the integral of g over [0, 1).
template <class Fn>
double midpoint_integral(Fn&& g, std::size_t nodes = kQuadratureNodes) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i)
    sum += g((static_cast<double>(i) + 0.5) / static_cast<double>(nodes));
  return sum / static_cast<double>(nodes);
}

/// int_0^1 (f - mean f)^2 by the midpoint rule.
double centered_energy(const TestFunction& f, std::size_t nodes = kQuadratureNodes);

/// Fourier coefficients c_k = int_0^1 f(t) exp(-i 2 pi k t) dt for
/// k = 0..kmax (c_{-k} = conj c_k). Exact for UserFourier, midpoint
/// quadrature otherwise.
std::vector<std::complex<double>> fourier_coefficients(
    const TestFunction& f, std::size_t kmax, std::size_t nodes = kQuadratureNodes);

/// int_0^1 |f'(t)|^2 dt. Quadrature of the analytic derivative for
/// MixtGauss, exact spectral sum for UserFourier; throws std::domain_error for
/// functions with jumps.
double derivative_energy(const TestFunction& f, std::size_t nodes = kQuadratureNodes);

/// Additive Gaussian noise level. Exactly one definition is active: a direct
/// sigma or one derived from the root signal-to-noise ratio.
class NoiseModel {
 public:
  static NoiseModel from_sigma(double sigma);
  static NoiseModel from_rsnr(double rsnr);

  bool is_rsnr() const noexcept { return rsnr_.has_value(); }
  std::optional<double> rsnr() const noexcept { return rsnr_; }
  /// sigma for this model under mean pattern f.
  double resolve(const TestFunction& f) const;

 private:
  NoiseModel() = default;
  double sigma_ = 0.0;
  std::optional<double> rsnr_;
};

/// sigma = sqrt(int (f - mean f)^2) / rsnr. Throws std::invalid_argument for
/// rsnr <= 0 and std::domain_error for constant f.
double calibrate_sigma(const TestFunction& f, double rsnr);

enum class ShiftLawKind { UniformSymmetric, UserDensity, PointMass };

/// Distribution of the random shifts, supported in [-kappa/2, kappa/2].
class ShiftLaw {
 public:
  /// Uniform on [-half_width, half_width], half_width in (0, 1/16]. The
  /// support parameter is kappa = 2 * half_width.
  static ShiftLaw uniform(double half_width);
  /// Density tabulated at equispaced nodes spanning [-kappa/2, kappa/2]
  /// (first and last node on the endpoints). Values need not be normalized.
  static ShiftLaw user_density(double kappa, std::vector<double> density_nodes);
  /// (2 / kappa) cos^2(pi x / kappa) on [-kappa/2, kappa/2], tabulated.
  static ShiftLaw raised_cosine(double kappa, std::size_t nodes = 4097);
  /// All shifts equal to `location`.
  static ShiftLaw point_mass(double location);

  ShiftLawKind kind() const noexcept { return kind_; }
  double half_width() const noexcept { return half_width_; }
  double kappa() const noexcept { return kappa_; }
  double location() const noexcept { return location_; }

  double sample(Rng& rng) const;
  /// Normalized density value (UserDensity and UniformSymmetric).
  double density(double x) const;
  /// Fisher information int (g')^2 / g. Present only for densities that are
  /// differentiable and vanish at both support endpoints.
  std::optional<double> fisher_information() const;

 private:
  ShiftLaw() = default;
  ShiftLawKind kind_ = ShiftLawKind::UniformSymmetric;
  double half_width_ = 0.0;
  double kappa_ = 0.0;
  double location_ = 0.0;
  std::vector<double> nodes_;  // normalized density values
  std::vector<double> cdf_;    // cumulative trapezoid integral at nodes
};

struct PanelTruth {
  std::vector<double> shifts;
  TestFunction f;
  double sigma = 0.0;
};

/// n x J matrix of noisy samples on the design t_l = l / n, l = 1..n.
/// Row index i holds t_{i+1}.
class CurvePanel {
 public:
  CurvePanel(RealMatrix samples, std::optional<PanelTruth> truth = std::nullopt);

  std::size_t n() const noexcept { return samples_.rows(); }
  std::size_t curves() const noexcept { return samples_.cols(); }
  const RealMatrix& samples() const noexcept { return samples_; }
  const std::optional<PanelTruth>& truth() const noexcept { return truth_; }
  /// Design point t_{i+1} = (i + 1) / n for row i.
  double design(std::size_t row) const noexcept {
    return static_cast<double>(row + 1) / static_cast<double>(n());
  }

 private:
  RealMatrix samples_;
  std::optional<PanelTruth> truth_;
};

/// Draws J shifts from `law`, then Gaussian noise column by column, from a
/// single generator seeded with `seed`.
CurvePanel simulate_panel(const TestFunction& f, std::size_t n, std::size_t curves,
                          const ShiftLaw& law, const NoiseModel& noise,
                          std::uint64_t seed);

}  // namespace curvereg
