#include "curvereg/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace curvereg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDykstraMaxRounds = 10000;
constexpr double kDykstraTol = 1e-12;
constexpr double kMinStep = 1e-20;
constexpr int kPolishEvery = 25;

/// Phase-rotated coefficients a[k, j] for k = -k0..k0 and their column sums.
struct RotatedBand {
  int k0 = 0;
  std::size_t curves = 0;
  std::vector<Complex> a;    // (2 k0 + 1) x J, frequency-major within a curve
  std::vector<Complex> sum;  // S_k = sum_j a[k, j]

  Complex& at(int k, std::size_t j) noexcept {
    return a[j * static_cast<std::size_t>(2 * k0 + 1) + static_cast<std::size_t>(k + k0)];
  }
  const Complex& at(int k, std::size_t j) const noexcept {
    return a[j * static_cast<std::size_t>(2 * k0 + 1) + static_cast<std::size_t>(k + k0)];
  }
  const Complex& total(int k) const noexcept { return sum[static_cast<std::size_t>(k + k0)]; }
};

template <class CoeffFn>
RotatedBand rotate(CoeffFn&& coeff, std::span<const double> theta, int k0) {
  RotatedBand band;
  band.k0 = k0;
  band.curves = theta.size();
  const auto width = static_cast<std::size_t>(2 * k0 + 1);
  band.a.resize(width * theta.size());
  band.sum.assign(width, Complex{});
  for (std::size_t j = 0; j < theta.size(); ++j) {
    for (int k = -k0; k <= k0; ++k) {
      const Complex v = coeff(k, j) * std::polar(1.0, kTwoPi * k * theta[j]);
      band.at(k, j) = v;
      band.sum[static_cast<std::size_t>(k + k0)] += v;
    }
  }
  return band;
}

void check_band(const SpectralPanel& spec, std::span<const double> theta, int k0) {
  if (k0 < 1 || k0 > spec.max_frequency())
    throw std::invalid_argument("k0 must satisfy 1 <= k0 < N/2 (got " + std::to_string(k0) +
                                ", N = " + std::to_string(spec.half_size()) + ")");
  if (theta.size() != spec.curves())
    throw std::invalid_argument("theta length must equal the number of curves");
}

RotatedBand rotate_panel(const SpectralPanel& spec, std::span<const double> theta, int k0) {
  check_band(spec, theta, k0);
  return rotate([&spec](int k, std::size_t j) { return spec(k, j); }, theta, k0);
}

double dispersion(const RotatedBand& band) {
  const double inv_j = 1.0 / static_cast<double>(band.curves);
  double total = 0.0;
  for (std::size_t j = 0; j < band.curves; ++j)
    for (int k = -band.k0; k <= band.k0; ++k)
      total += std::norm(band.at(k, j) - band.total(k) * inv_j);
  return total * inv_j;
}

std::vector<double> gradient(const RotatedBand& band) {
  const double jj = static_cast<double>(band.curves);
  const double scale = 4.0 * std::numbers::pi / (jj * jj);
  std::vector<double> g(band.curves, 0.0);
  for (std::size_t l = 0; l < band.curves; ++l) {
    double acc = 0.0;
    // Re[i z] = -Im z.
    for (int k = -band.k0; k <= band.k0; ++k)
      acc -= k * (std::conj(band.at(k, l)) * band.total(k)).imag();
    g[l] = scale * acc;
  }
  return g;
}

void box_clamp(std::vector<double>& v, double half) {
  for (auto& x : v) x = std::clamp(x, -half, half);
}

void hyperplane(std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (auto& x : v) x -= mean;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool in_constraint_set(std::span<const double> v, double kappa) {
  double sum = 0.0;
  for (const double x : v) {
    if (!(std::abs(x) <= kappa / 2.0)) return false;
    sum += x;
  }
  return std::abs(sum) <= ShiftVector::sum_tolerance(v.size());
}

/// Projection onto box ∩ {sum = 0} assuming the coordinates of `guess` at the
/// box faces are exactly the active constraints: x_i = raw_i - lambda on the
/// free set. Returns nothing if the KKT conditions fail for that guess.
std::optional<std::vector<double>> solve_for_active_set(std::span<const double> raw,
                                                        const std::vector<double>& guess,
                                                        double half) {
  constexpr double kFaceTol = 1e-9;
  double free_sum = 0.0;
  double pinned_sum = 0.0;
  std::size_t free = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (guess[i] >= half - kFaceTol) {
      pinned_sum += half;
    } else if (guess[i] <= -half + kFaceTol) {
      pinned_sum -= half;
    } else {
      free_sum += raw[i];
      ++free;
    }
  }
  if (free == 0) return std::nullopt;
  const double lambda = (free_sum + pinned_sum) / static_cast<double>(free);
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = raw[i] - lambda;
    if (guess[i] >= half - kFaceTol) {
      if (v < half) return std::nullopt;
      out[i] = half;
    } else if (guess[i] <= -half + kFaceTol) {
      if (v > -half) return std::nullopt;
      out[i] = -half;
    } else {
      if (std::abs(v) > half) return std::nullopt;
      out[i] = v;
    }
  }
  return out;
}

}  // namespace

ShiftVector::ShiftVector(std::vector<double> values, double kappa)
    : values_(std::move(values)), kappa_(kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("shift vector: kappa must be > 0");
  if (!in_constraint_set(values_, kappa))
    throw std::invalid_argument("shift vector: outside the box or not summing to zero");
}

ShiftVector ShiftVector::zero(std::size_t curves, double kappa) {
  return ShiftVector(std::vector<double>(curves, 0.0), kappa);
}

void OptimizerOptions::validate() const {
  if (max_iters < 1) throw std::invalid_argument("optimizer: max_iters must be >= 1");
  if (!(grad_tol > 0.0) || !(step_init > 0.0))
    throw std::invalid_argument("optimizer: grad_tol and step_init must be > 0");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw std::invalid_argument("optimizer: backtrack_factor must lie in (0, 1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("optimizer: armijo_c must lie in (0, 1)");
}

double criterion_mn(const SpectralPanel& spec, std::span<const double> theta, int k0) {
  return dispersion(rotate_panel(spec, theta, k0));
}

std::vector<double> grad_mn(const SpectralPanel& spec, std::span<const double> theta,
                            int k0) {
  return gradient(rotate_panel(spec, theta, k0));
}

RealMatrix hessian_mn(const SpectralPanel& spec, std::span<const double> theta, int k0) {
  const RotatedBand band = rotate_panel(spec, theta, k0);
  const std::size_t curves = band.curves;
  const double jj = static_cast<double>(curves);
  const double scale = 8.0 * std::numbers::pi * std::numbers::pi / (jj * jj);
  RealMatrix h(curves, curves);
  for (std::size_t l = 0; l < curves; ++l) {
    double diag = 0.0;
    for (int k = -k0; k <= k0; ++k)
      diag += k * k * (std::conj(band.at(k, l)) * (band.total(k) - band.at(k, l))).real();
    h(l, l) = scale * diag;
    for (std::size_t m = l + 1; m < curves; ++m) {
      double off = 0.0;
      for (int k = -k0; k <= k0; ++k)
        off += k * k * (std::conj(band.at(k, l)) * band.at(k, m)).real();
      h(l, m) = -scale * off;
      h(m, l) = h(l, m);
    }
  }
  return h;
}

double criterion_m(std::span<const Complex> true_coeffs, std::span<const double> theta,
                   std::span<const double> theta_star, int k0) {
  if (k0 < 1 || static_cast<std::size_t>(k0) >= true_coeffs.size())
    throw std::invalid_argument("criterion_m: need coefficients c_0..c_k0");
  if (theta.size() != theta_star.size() || theta.empty())
    throw std::invalid_argument("criterion_m: theta and theta_star lengths differ");
  const auto coeff = [&](int k, std::size_t j) {
    const Complex c = k >= 0 ? true_coeffs[static_cast<std::size_t>(k)]
                             : std::conj(true_coeffs[static_cast<std::size_t>(-k)]);
    return c * std::polar(1.0, -kTwoPi * k * theta_star[j]);
  };
  return dispersion(rotate(coeff, theta, k0));
}

ShiftVector project_theta(std::span<const double> raw, double kappa) {
  if (raw.size() < 2) throw std::invalid_argument("project_theta: need J >= 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("project_theta: kappa must be > 0");
  if (in_constraint_set(raw, kappa))
    return ShiftVector(std::vector<double>(raw.begin(), raw.end()), kappa);

  const double half = kappa / 2.0;
  const std::size_t n = raw.size();
  std::vector<double> x(raw.begin(), raw.end());
  std::vector<double> p(n, 0.0), q(n, 0.0), y(n, 0.0), prev_y(n), next(n);
  for (int round = 0; round < kDykstraMaxRounds; ++round) {
    prev_y = y;
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + p[i];
    hyperplane(y);
    for (std::size_t i = 0; i < n; ++i) p[i] = x[i] + p[i] - y[i];
    for (std::size_t i = 0; i < n; ++i) next[i] = y[i] + q[i];
    box_clamp(next, half);
    for (std::size_t i = 0; i < n; ++i) q[i] = y[i] + q[i] - next[i];
    // Both iterate sequences must settle and agree; either one alone can sit
    // still while the correction terms are moving.
    const double step = std::max({max_abs_diff(next, x), max_abs_diff(y, prev_y),
                                  max_abs_diff(next, y)});
    x.swap(next);
    if (round > 0 && step < kDykstraTol) break;
  }

  // Dykstra's step-size stop leaves the iterate within ~tolerance / (1 - rate)
  // of the projection. Its active set is reliable, so finish with the exact
  // KKT solution for that set whenever it verifies.
  if (auto exact = solve_for_active_set(raw, x, half)) x = std::move(*exact);
  for (int pass = 0; pass < 4; ++pass) {
    double sum = 0.0;
    for (const double v : x) sum += v;
    if (std::abs(sum) <= 0.25 * ShiftVector::sum_tolerance(n)) break;
    std::size_t free = 0;
    for (const double v : x) free += std::abs(v) < half;
    if (free == 0) break;
    const double delta = sum / static_cast<double>(free);
    for (auto& v : x)
      if (std::abs(v) < half) v = std::clamp(v - delta, -half, half);
  }
  return ShiftVector(std::move(x), kappa);
}

namespace {

/// One Newton step on criterion_mn restricted to the coordinates off the box
/// faces and to the sum-zero hyperplane, projected back onto the constraint set.
std::optional<ShiftVector> newton_polish(const SpectralPanel& spec, const ShiftVector& theta,
                                         const std::vector<double>& g, int k0) {
  const double half = theta.kappa() / 2.0;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (std::abs(theta[i]) < half) free.push_back(i);
  if (free.size() < 2) return std::nullopt;

  const RealMatrix h = hessian_mn(spec, theta.values(), k0);
  const auto nf = static_cast<Eigen::Index>(free.size());
  // [H_ff 1; 1' 0] [step; mu] = [-g_f; 0]
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + 1, nf + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + 1);
  for (Eigen::Index a = 0; a < nf; ++a) {
    for (Eigen::Index b = 0; b < nf; ++b)
      kkt(a, b) = h(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
    kkt(a, nf) = 1.0;
    kkt(nf, a) = 1.0;
    rhs(a) = -g[free[static_cast<std::size_t>(a)]];
  }
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  if (!sol.allFinite()) return std::nullopt;

  std::vector<double> raw(theta.values().begin(), theta.values().end());
  for (Eigen::Index a = 0; a < nf; ++a) raw[free[static_cast<std::size_t>(a)]] += sol(a);
  return project_theta(raw, theta.kappa());
}

}  // namespace

ShiftEstimate estimate_shifts(const SpectralPanel& spec, int k0, double kappa,
                              const OptimizerOptions& opts) {
  opts.validate();
  const std::size_t curves = spec.curves();
  if (curves < 2) throw std::invalid_argument("estimate_shifts: need J >= 2");
  check_band(spec, std::vector<double>(curves, 0.0), k0);

  const auto objective = [&](std::span<const double> th) {
    return criterion_mn(spec, th, k0);
  };
  const auto projected_gap = [&](std::span<const double> th, const std::vector<double>& g) {
    std::vector<double> trial(curves);
    for (std::size_t i = 0; i < curves; ++i) trial[i] = th[i] - g[i];
    const ShiftVector proj = project_theta(trial, kappa);
    double s = 0.0;
    for (std::size_t i = 0; i < curves; ++i) s += (th[i] - proj[i]) * (th[i] - proj[i]);
    return std::sqrt(s);
  };

  ShiftVector theta = ShiftVector::zero(curves, kappa);
  double value = objective(theta.values());
  std::vector<double> g = grad_mn(spec, theta.values(), k0);
  ShiftDiagnostics diag;
  diag.criterion_trace.push_back(value);
  const double stop = opts.grad_tol * std::sqrt(static_cast<double>(curves));

  double gap = projected_gap(theta.values(), g);
  while (diag.iterations < opts.max_iters) {
    if (gap < stop) {
      diag.converged = true;
      break;
    }
    ++diag.iterations;
    bool accepted = false;
    for (double step = opts.step_init; step >= kMinStep; step *= opts.backtrack_factor) {
      std::vector<double> raw(curves);
      for (std::size_t i = 0; i < curves; ++i) raw[i] = theta[i] - step * g[i];
      ShiftVector candidate = project_theta(raw, kappa);
      double descent = 0.0;
      for (std::size_t i = 0; i < curves; ++i) descent += g[i] * (candidate[i] - theta[i]);
      const double required = value + opts.armijo_c * descent;
      // Sufficient decrease below the resolution of `value`: backtracking can
      // only churn from here on.
      if (required == value) break;
      const double cand_value = objective(candidate.values());
      if (!(cand_value <= required)) continue;
      theta = std::move(candidate);
      value = cand_value;
      g = grad_mn(spec, theta.values(), k0);
      accepted = true;
      break;
    }
    if (accepted) {
      diag.criterion_trace.push_back(value);
      gap = projected_gap(theta.values(), g);
      // Zig-zagging against active box faces can stall plain gradient steps.
      if (diag.iterations % kPolishEvery != 0 || gap < stop) continue;
    }

    // Once criterion differences drop below round-off the line search cannot
    // make progress; a Newton step on the free coordinates needs only the
    // gradient, so it can still close the remaining stationarity gap.
    auto polished = newton_polish(spec, theta, g, k0);
    bool improved = false;
    if (polished) {
      const auto polished_g = grad_mn(spec, polished->values(), k0);
      const double polished_gap = projected_gap(polished->values(), polished_g);
      const double polished_value = objective(polished->values());
      const double slack = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
      if (polished_gap < gap && polished_value <= value + slack) {
        theta = std::move(*polished);
        value = polished_value;
        g = polished_g;
        gap = polished_gap;
        ++diag.newton_steps;
        improved = true;
      }
    }
    if (!accepted && !improved) break;
  }
  if (!diag.converged && gap < stop) diag.converged = true;
  diag.criterion = value;
  diag.projected_grad_norm = gap;
  return {std::move(theta), std::move(diag)};
}

}  // namespace curvereg
