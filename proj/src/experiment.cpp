#include "curvereg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "curvereg/rng.hpp"

namespace curvereg {
namespace {

double squared_orbit(const MeanEstimate& est, const MeanEstimate& truth) {
  const double d = orbit_distance(est, truth).distance;
  return d * d;
}

// Runs body(i) for i in [0, count), spread over `threads` workers. Each index
// writes only its own slot, so the result does not depend on scheduling.
template <class Body>
void for_each_index(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Summary Summary::of(std::vector<double> values) {
  Summary s;
  const auto m = static_cast<double>(values.size());
  if (!values.empty()) {
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / m;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.stderr_ = std::sqrt(ss / (m - 1.0) / m);
    } else {
      s.stderr_ = std::numeric_limits<double>::infinity();
    }
  }
  s.values = std::move(values);
  return s;
}

TruthReference truth_reference(const TestFunction& f, int band) {
  if (band < 1) throw std::invalid_argument("truth_reference: band must be >= 1");
  const auto coeffs = fourier_coefficients(f, static_cast<std::size_t>(band));
  TruthReference out{MeanEstimate::from_nonnegative(coeffs), 0.0};
  const double total = midpoint_integral([&f](double t) {
    const double v = f(t);
    return v * v;
  });
  double kept = std::norm(coeffs[0]);
  for (std::size_t k = 1; k < coeffs.size(); ++k) kept += 2.0 * std::norm(coeffs[k]);
  out.neglected_tail = std::max(total - kept, 0.0);
  return out;
}

int reference_band(std::size_t n, const EstimatorConfig& cfg) {
  return 4 * cfg.resolve_m1(n / 2);
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t curves,
                               std::size_t rep) {
  return derive_seed(seed, {static_cast<std::uint64_t>(Stream::Sweep), n, curves, rep});
}

ReplicationOutcome run_replication(const TestFunction& f, const TruthReference& truth,
                                   std::size_t n, std::size_t curves, const ShiftLaw& law,
                                   const EstimatorConfig& cfg, std::uint64_t rep_seed) {
  const CurvePanel panel =
      simulate_panel(f, n, curves, law, NoiseModel::from_sigma(cfg.sigma), rep_seed);
  const MeanResult fre = estimate_mean(panel, cfg);
  const OracleResult ora = oracle_mean(panel, cfg);

  const auto [even, odd] = split_samples(panel);
  const SpectralPanel spec_odd = empirical_coefficients(odd);
  const std::vector<double> zero(curves, 0.0);
  const int naive_m = select_cutoff(spec_odd, zero, cfg);

  ReplicationOutcome out;
  out.seed = rep_seed;
  out.frechet_risk = squared_orbit(fre.estimate, truth.coeffs);
  out.oracle_risk = squared_orbit(ora.estimate, truth.coeffs);
  out.naive_risk = squared_orbit(smoothed_mean(spec_odd, zero, naive_m), truth.coeffs);
  out.shift_mse = shift_mse(fre.shifts.values(), panel.truth()->shifts);
  out.m_hat = fre.m_hat;
  out.oracle_m_hat = ora.m_hat;
  out.naive_m_hat = naive_m;
  out.converged = fre.diagnostics.converged;
  return out;
}

RiskRecord risk_montecarlo(const TestFunction& f, std::size_t n, std::size_t curves,
                           const ShiftLaw& law, const EstimatorConfig& cfg, std::size_t reps,
                           std::uint64_t seed, unsigned threads) {
  if (reps < 1) throw std::invalid_argument("risk_montecarlo: need at least one replication");
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("risk_montecarlo: n must be even");
  cfg.validate(n / 2);
  const TruthReference truth = truth_reference(f, reference_band(n, cfg));

  RiskRecord rec;
  rec.n = n;
  rec.curves = curves;
  rec.reps = reps;
  rec.replications.resize(reps);
  for_each_index(reps, threads, [&](std::size_t r) {
    rec.replications[r] = run_replication(f, truth, n, curves, law, cfg,
                                          replication_seed(seed, n, curves, r));
  });

  std::vector<double> fr(reps), orc(reps), nv(reps), sm(reps);
  std::size_t failures = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto& o = rec.replications[r];
    fr[r] = o.frechet_risk;
    orc[r] = o.oracle_risk;
    nv[r] = o.naive_risk;
    sm[r] = o.shift_mse;
    if (!o.converged) ++failures;
  }
  rec.frechet = Summary::of(std::move(fr));
  rec.oracle = Summary::of(std::move(orc));
  rec.naive = Summary::of(std::move(nv));
  rec.shift_mse = Summary::of(std::move(sm));
  rec.nonconv_rate = static_cast<double>(failures) / static_cast<double>(reps);
  return rec;
}

void SweepGrid::validate() const {
  if (n_values.empty() || curve_values.empty())
    throw std::invalid_argument("sweep grid: empty n or J list");
  for (auto n : n_values)
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("sweep grid: n values must be even and >= 4");
  for (auto j : curve_values)
    if (j < 2) throw std::invalid_argument("sweep grid: J values must be >= 2");
  if (reps < 1) throw std::invalid_argument("sweep grid: reps must be >= 1");
  for (auto n : n_values) {
    EstimatorConfig probe = cfg;
    if (rsnr) probe.sigma = 1.0;
    probe.validate(n / 2);
  }
}

const SweepCell& SweepResult::at(std::size_t n, std::size_t curves) const {
  for (const auto& c : cells)
    if (c.n == n && c.curves == curves) return c;
  throw std::out_of_range("SweepResult::at: no such cell");
}

SweepResult relative_error_sweep(const SweepGrid& grid) {
  grid.validate();
  EstimatorConfig cfg = grid.cfg;
  if (grid.rsnr) cfg.sigma = calibrate_sigma(grid.f, *grid.rsnr);

  SweepResult out;
  for (auto n : grid.n_values) {
    for (auto curves : grid.curve_values) {
      const RiskRecord rec = risk_montecarlo(grid.f, n, curves, grid.law, cfg, grid.reps,
                                             grid.base_seed, grid.threads);
      SweepCell cell;
      cell.n = n;
      cell.curves = curves;
      cell.frechet = rec.frechet;
      cell.oracle = rec.oracle;
      cell.naive = rec.naive;
      // Ratio of sums equals ratio of means for paired replications.
      cell.relative_error = rec.oracle.mean > 0.0 ? rec.frechet.mean / rec.oracle.mean
                            : rec.frechet.mean == 0.0 ? 1.0
                                                      : std::numeric_limits<double>::infinity();
      cell.shift_mse = rec.shift_mse.mean;
      cell.nonconv_rate = rec.nonconv_rate;
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

double shift_mse(std::span<const double> theta_hat, std::span<const double> theta_star) {
  if (theta_hat.size() != theta_star.size() || theta_hat.empty())
    throw std::invalid_argument("shift_mse: length mismatch");
  const auto len = static_cast<double>(theta_star.size());
  double center_hat = 0.0, center_star = 0.0;
  for (std::size_t j = 0; j < theta_star.size(); ++j) {
    center_hat += theta_hat[j];
    center_star += theta_star[j];
  }
  center_hat /= len;
  center_star /= len;
  double sum = 0.0;
  for (std::size_t j = 0; j < theta_star.size(); ++j) {
    const double d = (theta_hat[j] - center_hat) - (theta_star[j] - center_star);
    sum += d * d;
  }
  return sum / len;
}

RateFit rate_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("rate_slope: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("rate_slope: need at least two points");
  const auto m = static_cast<double>(xs.size());
  std::vector<double> lx(xs.size()), ly(ys.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw std::invalid_argument("rate_slope: inputs must be finite and positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate_slope: x values must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : std::min(1.0, sxy * sxy / (sxx * syy));
  return fit;
}

VanTreesBound van_trees_bound(const TestFunction& f, const ShiftLaw& law, std::size_t n,
                              double sigma) {
  if (n < 1) throw std::invalid_argument("van_trees_bound: n must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("van_trees_bound: sigma must be >= 0");
  VanTreesBound b;
  b.derivative_energy = derivative_energy(f);
  const auto info = law.fisher_information();
  b.conservative = !info.has_value();
  b.fisher_information = info.value_or(0.0);
  const double denom =
      static_cast<double>(n) * b.derivative_energy + sigma * sigma * b.fisher_information;
  b.value = denom > 0.0 ? sigma * sigma / denom : std::numeric_limits<double>::infinity();
  return b;
}

CutoffRiskProfile cutoff_risk_profile(const TestFunction& f, std::size_t n,
                                      std::size_t curves, const ShiftLaw& law,
                                      const EstimatorConfig& cfg, std::size_t reps,
                                      std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("cutoff_risk_profile: need reps >= 1");
  cfg.validate(n / 2);
  const int m1 = cfg.resolve_m1(n / 2);
  const TruthReference truth = truth_reference(f, reference_band(n, cfg));

  CutoffRiskProfile prof;
  prof.mean_risk_by_m.assign(static_cast<std::size_t>(m1), 0.0);
  std::vector<double> selected(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const CurvePanel panel = simulate_panel(f, n, curves, law, NoiseModel::from_sigma(cfg.sigma),
                                            replication_seed(seed, n, curves, r));
    const auto [even, odd] = split_samples(panel);
    const SpectralPanel spec_even = empirical_coefficients(even);
    const SpectralPanel spec_odd = empirical_coefficients(odd);
    const ShiftEstimate est = estimate_shifts(spec_even, cfg.k0, cfg.kappa, cfg.optimizer);
    const auto theta = est.shifts.values();
    const MeanEstimate full = smoothed_mean(spec_odd, theta, m1);
    for (int m = 1; m <= m1; ++m)
      prof.mean_risk_by_m[static_cast<std::size_t>(m - 1)] +=
          squared_orbit(full.truncated(m), truth.coeffs);
    const int m_hat = select_cutoff(spec_odd, theta, cfg);
    selected[r] = squared_orbit(full.truncated(m_hat), truth.coeffs);
  }
  for (auto& v : prof.mean_risk_by_m) v /= static_cast<double>(reps);
  const Summary s = Summary::of(std::move(selected));
  prof.mean_selected_risk = s.mean;
  prof.selected_stderr = s.stderr_;
  prof.variance_unit =
      cfg.sigma * cfg.sigma / (static_cast<double>(n / 2) * static_cast<double>(curves));
  return prof;
}

}  // namespace curvereg
