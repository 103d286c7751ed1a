#pragma once

// Deterministic Monte Carlo harness: replicated risk estimation for the
// Frechet, oracle and naive means, the relative-error sweep over (n, J),
// log-log rate fits and the van Trees shift bound.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curvereg/frechet.hpp"
#include "curvereg/signal.hpp"

namespace curvereg {

/// Sample mean and its standard error. A single value has unbounded
/// standard error (+inf).
struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<double> values;

  static Summary of(std::vector<double> values);
};

/// One replication, all estimators fed the same simulated panel.
struct ReplicationOutcome {
  std::uint64_t seed = 0;
  double frechet_risk = 0.0;
  double oracle_risk = 0.0;
  double naive_risk = 0.0;
  double shift_mse = 0.0;
  int m_hat = 0;
  int oracle_m_hat = 0;
  int naive_m_hat = 0;
  bool converged = true;
};

struct RiskRecord {
  std::size_t n = 0;
  std::size_t curves = 0;
  std::size_t reps = 0;
  Summary frechet;
  Summary oracle;
  Summary naive;
  Summary shift_mse;
  double nonconv_rate = 0.0;
  std::vector<ReplicationOutcome> replications;
};

/// Reference truth for risk evaluation: the Fourier expansion of f truncated
/// at `band` (quadrature coefficients).
struct TruthReference {
  MeanEstimate coeffs;
  /// sum_{|k| > band} |c_k|^2 estimated from the quadrature energy.
  double neglected_tail = 0.0;
};

TruthReference truth_reference(const TestFunction& f, int band);

/// Reference band used for risk: 4 * m1.
int reference_band(std::size_t n, const EstimatorConfig& cfg);

/// Per-replication seed: derive_seed(seed, {Stream::Sweep, n, J, rep}).
std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t curves,
                               std::size_t rep);

/// Simulates one panel (noise sigma = cfg.sigma) and scores every estimator
/// by the squared orbit distance to `truth`. The naive mean uses the same
/// penalized cutoff rule with zero shifts.
ReplicationOutcome run_replication(const TestFunction& f, const TruthReference& truth,
                                   std::size_t n, std::size_t curves, const ShiftLaw& law,
                                   const EstimatorConfig& cfg, std::uint64_t rep_seed);

/// M replications of run_replication. `threads` > 1 runs replications
/// concurrently; results are identical to the sequential run.
RiskRecord risk_montecarlo(const TestFunction& f, std::size_t n, std::size_t curves,
                           const ShiftLaw& law, const EstimatorConfig& cfg, std::size_t reps,
                           std::uint64_t seed, unsigned threads = 1);

struct SweepGrid {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> curve_values;
  std::size_t reps = 1;
  std::uint64_t base_seed = 0;
  /// sigma is recomputed per function from rsnr when `rsnr` is set.
  EstimatorConfig cfg;
  std::optional<double> rsnr;
  TestFunction f = TestFunction::mixt_gauss();
  ShiftLaw law = ShiftLaw::uniform(1.0 / 16.0);
  unsigned threads = 1;

  void validate() const;
};

struct SweepCell {
  std::size_t n = 0;
  std::size_t curves = 0;
  Summary frechet;
  Summary oracle;
  Summary naive;
  /// Ratio of summed Frechet risk to summed oracle risk.
  double relative_error = 0.0;
  double shift_mse = 0.0;
  double nonconv_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // n-major, then J, in grid order
  const SweepCell& at(std::size_t n, std::size_t curves) const;
};

/// Runs every (n, J) cell with paired replications.
SweepResult relative_error_sweep(const SweepGrid& grid);

/// (1/J) ||theta_hat - theta0||^2 with theta0 the centered true shifts.
double shift_mse(std::span<const double> theta_hat, std::span<const double> theta_star);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log y on log x. Needs >= 2 points with distinct x, all
/// positive.
RateFit rate_slope(std::span<const double> xs, std::span<const double> ys);

struct VanTreesBound {
  double value = 0.0;
  double derivative_energy = 0.0;
  /// Fisher information of the shift density (0 in the conservative variant).
  double fisher_information = 0.0;
  /// True when the law violates the smoothness precondition and the density
  /// term was dropped. The value is then larger than the bound proper and is
  /// only a diagnostic.
  bool conservative = false;
};

/// sigma^2 / (n int |f'|^2 + sigma^2 I_g).
VanTreesBound van_trees_bound(const TestFunction& f, const ShiftLaw& law, std::size_t n,
                              double sigma);

/// Risk of f_hat^(m) for every m = 1..m1 plus the selected estimator, over
/// replications. Used to check the oracle inequality of the cutoff rule.
struct CutoffRiskProfile {
  std::vector<double> mean_risk_by_m;  // entry m - 1
  double mean_selected_risk = 0.0;
  double selected_stderr = 0.0;
  double variance_unit = 0.0;  // sigma^2 / (N J)
};

CutoffRiskProfile cutoff_risk_profile(const TestFunction& f, std::size_t n,
                                      std::size_t curves, const ShiftLaw& law,
                                      const EstimatorConfig& cfg, std::size_t reps,
                                      std::uint64_t seed);

}  // namespace curvereg
