#pragma once

// Shift registration: the alignment criterion over the low band |k| <= k0,
// its analytic derivatives, the noiseless population criterion, the
// projection onto the constrained shift set and the projected-gradient
// estimator.

#include <span>
#include <vector>

#include "curvereg/matrix.hpp"
#include "curvereg/spectral.hpp"

namespace curvereg {

/// J shifts in the box [-kappa/2, kappa/2] that sum to zero.
class ShiftVector {
 public:
  /// Validates both constraints; throws std::invalid_argument otherwise.
  ShiftVector(std::vector<double> values, double kappa);
  static ShiftVector zero(std::size_t curves, double kappa);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double kappa() const noexcept { return kappa_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  /// Tolerance on |sum| accepted by the constructor.
  static double sum_tolerance(std::size_t curves) noexcept {
    return 1e-12 * static_cast<double>(curves);
  }

 private:
  std::vector<double> values_;
  double kappa_;
};

struct OptimizerOptions {
  int max_iters = 500;
  double grad_tol = 1e-9;
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;

  void validate() const;
};

/// M_n(theta) = (1/J) sum_j sum_{|k|<=k0} |a_kj - (1/J) sum_j' a_kj'|^2 with
/// a_kj = c_hat[k, j] exp(i 2 pi k theta_j). `theta` need not lie in the
/// constrained set. Requires 1 <= k0 < N/2 and theta.size() == J.
double criterion_mn(const SpectralPanel& spec, std::span<const double> theta, int k0);

/// Exact gradient of criterion_mn.
std::vector<double> grad_mn(const SpectralPanel& spec, std::span<const double> theta,
                            int k0);

/// Exact Hessian of criterion_mn (J x J, symmetric by construction).
RealMatrix hessian_mn(const SpectralPanel& spec, std::span<const double> theta, int k0);

/// Noiseless criterion: criterion_mn with c_hat[k, j] replaced by
/// c_k exp(-i 2 pi k theta*_j). `true_coeffs` holds c_0..c_K with K >= k0.
double criterion_m(std::span<const Complex> true_coeffs, std::span<const double> theta,
                   std::span<const double> theta_star, int k0);

/// Euclidean projection onto {box [-kappa/2, kappa/2]^J} intersected with
/// {sum = 0}, by Dykstra's alternating projections.
ShiftVector project_theta(std::span<const double> raw, double kappa);

struct ShiftDiagnostics {
  int iterations = 0;
  /// Gradient-only refinement steps taken after the line search stalled.
  int newton_steps = 0;
  double criterion = 0.0;
  double projected_grad_norm = 0.0;
  bool converged = false;
  /// Criterion after each accepted Armijo step, starting with the initial value.
  std::vector<double> criterion_trace;
};

struct ShiftEstimate {
  ShiftVector shifts;
  ShiftDiagnostics diagnostics;
};

/// Projected gradient descent on criterion_mn from theta = 0 with Armijo
/// backtracking. Stops once ||theta - P(theta - grad)|| < grad_tol sqrt(J).
/// When backtracking can no longer resolve a decrease (round-off floor of the
/// criterion), Newton steps on the free coordinates finish the job as long as
/// they shrink the stationarity gap.
/// Non-convergence is reported in the diagnostics, never thrown.
ShiftEstimate estimate_shifts(const SpectralPanel& spec, int k0, double kappa,
                              const OptimizerOptions& opts = {});

}  // namespace curvereg
