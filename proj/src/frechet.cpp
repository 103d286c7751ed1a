#include "curvereg/frechet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "curvereg/simd.hpp"

namespace curvereg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_cutoff(const SpectralPanel& spec, int m) {
  if (m < 1 || m > spec.max_frequency())
    throw std::invalid_argument("cutoff m must satisfy 1 <= m < N/2 (got " +
                                std::to_string(m) + ")");
}

}  // namespace

int EstimatorConfig::resolve_m1(std::size_t half_size) const {
  return m1.value_or(static_cast<int>(half_size / 2) - 1);
}

void EstimatorConfig::validate(std::size_t half_size) const {
  const int max_freq = static_cast<int>(half_size / 2) - 1;
  if (k0 < 1 || k0 > max_freq)
    throw std::invalid_argument("config: k0 must satisfy 1 <= k0 < N/2");
  if (!(kappa > 0.0 && kappa <= 0.125))
    throw std::invalid_argument("config: kappa must lie in (0, 1/8]");
  if (!(eta > 1.0)) throw std::invalid_argument("config: eta must be > 1");
  const int top = resolve_m1(half_size);
  if (top < 1 || top > max_freq)
    throw std::invalid_argument("config: m1 must satisfy 1 <= m1 < N/2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("config: sigma must be finite and >= 0");
  optimizer.validate();
}

std::vector<Complex> aligned_coefficients(const SpectralPanel& spec,
                                          std::span<const double> theta, int m) {
  if (theta.size() != spec.curves())
    throw std::invalid_argument("aligned_coefficients: theta length must equal J");
  if (m < 0 || m > spec.max_frequency())
    throw std::invalid_argument("aligned_coefficients: cutoff out of band");
  const auto width = static_cast<std::size_t>(m + 1);
  std::vector<double> acc_re(width, 0.0), acc_im(width, 0.0);
  std::vector<double> c_re(width), c_im(width), ph_re(width), ph_im(width);
  for (std::size_t j = 0; j < spec.curves(); ++j) {
    for (int k = 0; k <= m; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      c_re[idx] = spec(k, j).real();
      c_im[idx] = spec(k, j).imag();
      const Complex ph = std::polar(1.0, kTwoPi * k * theta[j]);
      ph_re[idx] = ph.real();
      ph_im[idx] = ph.imag();
    }
    simd::cmul_accumulate(c_re, c_im, ph_re, ph_im, acc_re, acc_im);
  }
  const double inv_j = 1.0 / static_cast<double>(spec.curves());
  std::vector<Complex> out(width);
  for (std::size_t k = 0; k < width; ++k) out[k] = Complex(acc_re[k], acc_im[k]) * inv_j;
  out[0] = out[0].real();
  return out;
}

MeanEstimate smoothed_mean(const SpectralPanel& spec_odd, std::span<const double> theta,
                           int m) {
  check_cutoff(spec_odd, m);
  return MeanEstimate::from_nonnegative(aligned_coefficients(spec_odd, theta, m));
}

std::vector<double> cutoff_criterion(const SpectralPanel& spec_odd,
                                     std::span<const double> theta,
                                     const EstimatorConfig& cfg) {
  const int m1 = cfg.resolve_m1(spec_odd.half_size());
  check_cutoff(spec_odd, m1);
  const auto aligned = aligned_coefficients(spec_odd, theta, m1);
  const double variance = cfg.sigma * cfg.sigma /
                          (static_cast<double>(spec_odd.half_size()) *
                           static_cast<double>(spec_odd.curves()));
  // tail[m] = sum_{m < |k| <= m1} |a_k|^2, accumulated from the top down.
  std::vector<double> tail(static_cast<std::size_t>(m1 + 1), 0.0);
  for (int m = m1 - 1; m >= 0; --m)
    tail[static_cast<std::size_t>(m)] =
        tail[static_cast<std::size_t>(m + 1)] + 2.0 * std::norm(aligned[static_cast<std::size_t>(m + 1)]);
  std::vector<double> values(static_cast<std::size_t>(m1));
  for (int m = 1; m <= m1; ++m)
    values[static_cast<std::size_t>(m - 1)] =
        tail[static_cast<std::size_t>(m)] + cfg.eta * (2.0 * m + 1.0) * variance;
  return values;
}

int select_cutoff(const SpectralPanel& spec_odd, std::span<const double> theta,
                  const EstimatorConfig& cfg) {
  const auto values = cutoff_criterion(spec_odd, theta, cfg);
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return static_cast<int>(best) + 1;
}

MeanResult estimate_mean(const CurvePanel& panel, const EstimatorConfig& cfg) {
  const auto [even, odd] = split_samples(panel);
  cfg.validate(even.half_size());
  if (panel.curves() < 2) throw std::invalid_argument("estimate_mean: need J >= 2");
  const SpectralPanel spec_even = empirical_coefficients(even);
  ShiftEstimate shifts = estimate_shifts(spec_even, cfg.k0, cfg.kappa, cfg.optimizer);
  const SpectralPanel spec_odd = empirical_coefficients(odd);
  const int m_hat = select_cutoff(spec_odd, shifts.shifts.values(), cfg);
  return {smoothed_mean(spec_odd, shifts.shifts.values(), m_hat), std::move(shifts.shifts),
          m_hat, std::move(shifts.diagnostics)};
}

OracleResult oracle_mean(const CurvePanel& panel, std::span<const double> true_shifts,
                         const EstimatorConfig& cfg) {
  if (true_shifts.size() != panel.curves())
    throw std::invalid_argument("oracle_mean: need one true shift per curve");
  const auto [even, odd] = split_samples(panel);
  cfg.validate(odd.half_size());
  const SpectralPanel spec_odd = empirical_coefficients(odd);
  const int m_hat = select_cutoff(spec_odd, true_shifts, cfg);
  return {smoothed_mean(spec_odd, true_shifts, m_hat), m_hat};
}

OracleResult oracle_mean(const CurvePanel& panel, const EstimatorConfig& cfg) {
  if (!panel.truth())
    throw std::invalid_argument("oracle_mean: panel carries no true shifts");
  return oracle_mean(panel, panel.truth()->shifts, cfg);
}

MeanEstimate naive_mean(const CurvePanel& panel, int m) {
  const auto [even, odd] = split_samples(panel);
  const SpectralPanel spec_odd = empirical_coefficients(odd);
  check_cutoff(spec_odd, m);
  const std::vector<double> zero(panel.curves(), 0.0);
  return MeanEstimate::from_nonnegative(aligned_coefficients(spec_odd, zero, m));
}

}  // namespace curvereg
