#pragma once

// Smoothed Frechet mean of the aligned curves, penalized cutoff selection,
// and the two baselines: the oracle mean (true shifts) and the naive
// Euclidean mean (no alignment).

#include <optional>
#include <span>
#include <vector>

#include "curvereg/registration.hpp"
#include "curvereg/signal.hpp"
#include "curvereg/spectral.hpp"

namespace curvereg {

struct EstimatorConfig {
  int k0 = 5;
  /// Support parameter of the constrained set: shifts live in [-kappa/2, kappa/2].
  double kappa = 0.125;
  double eta = 2.5;
  /// Maximal cutoff; floor(N/2) - 1 when unset.
  std::optional<int> m1;
  /// Known noise standard deviation.
  double sigma = 0.0;
  OptimizerOptions optimizer;

  int resolve_m1(std::size_t half_size) const;
  /// Checks every field against a panel with N = half_size rows per half.
  void validate(std::size_t half_size) const;
};

/// Aligned mean coefficients a_k = (1/J) sum_j c_hat[k, j] exp(i 2 pi k theta_j)
/// for k = 0..m (negative frequencies follow by symmetry).
std::vector<Complex> aligned_coefficients(const SpectralPanel& spec,
                                          std::span<const double> theta, int m);

/// f_hat^(m): the aligned mean truncated at |k| <= m. Requires 1 <= m < N/2.
MeanEstimate smoothed_mean(const SpectralPanel& spec_odd, std::span<const double> theta,
                           int m);

/// Values of the selection criterion
///   sum_{m < |k| <= m1} |a_k|^2 + eta (2m + 1) sigma^2 / (N J)
/// for m = 1..m1 (entry m - 1).
std::vector<double> cutoff_criterion(const SpectralPanel& spec_odd,
                                     std::span<const double> theta,
                                     const EstimatorConfig& cfg);

/// Smallest minimizer of cutoff_criterion over m = 1..m1.
int select_cutoff(const SpectralPanel& spec_odd, std::span<const double> theta,
                  const EstimatorConfig& cfg);

struct MeanResult {
  MeanEstimate estimate;
  ShiftVector shifts;
  int m_hat = 0;
  ShiftDiagnostics diagnostics;
};

/// Full pipeline: split, shifts from the even half, aligned mean of the odd
/// half at the selected cutoff.
MeanResult estimate_mean(const CurvePanel& panel, const EstimatorConfig& cfg);

struct OracleResult {
  MeanEstimate estimate;
  int m_hat = 0;
};

/// Same pipeline with the true shifts in place of the estimated ones.
OracleResult oracle_mean(const CurvePanel& panel, std::span<const double> true_shifts,
                         const EstimatorConfig& cfg);
/// Uses the panel's stored truth; throws std::invalid_argument without one.
OracleResult oracle_mean(const CurvePanel& panel, const EstimatorConfig& cfg);

/// Unaligned average of the odd-half coefficients, truncated at m < N/2.
MeanEstimate naive_mean(const CurvePanel& panel, int m);

}  // namespace curvereg
