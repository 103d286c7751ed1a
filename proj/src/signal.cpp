#include "curvereg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curvereg/rng.hpp"
#include "curvereg/simd.hpp"

namespace curvereg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPeriodizationReach = 2;  // translates -2..2
constexpr double kMaxHalfWidth = 1.0 / 16.0;

double wrap01(double t) noexcept { return t - std::floor(t); }

double sgn(double v) noexcept { return static_cast<double>((v > 0.0) - (v < 0.0)); }

}  // namespace

std::string_view to_string(FunctionKind kind) noexcept {
  switch (kind) {
    case FunctionKind::MixtGauss:
      return "mixtgauss";
    case FunctionKind::HeaviSine:
      return "heavisine";
    case FunctionKind::UserFourier:
      return "userfourier";
  }
  return "unknown";
}

TestFunction TestFunction::mixt_gauss() {
  return mixt_gauss({1.0, 0.25, 0.03, 0.8, 0.5, 0.05, 1.2, 0.75, 0.03});
}

TestFunction TestFunction::mixt_gauss(std::vector<double> triples) {
  if (triples.empty() || triples.size() % 3 != 0)
    throw std::invalid_argument("mixt_gauss: parameters must be (a, mu, w) triples");
  for (std::size_t i = 0; i < triples.size(); i += 3)
    if (!(triples[i + 2] > 0.0))
      throw std::invalid_argument("mixt_gauss: widths must be positive");
  return TestFunction(FunctionKind::MixtGauss, std::move(triples));
}

TestFunction TestFunction::heavi_sine() {
  return TestFunction(FunctionKind::HeaviSine, {4.0, 0.3, 0.72});
}

TestFunction TestFunction::user_fourier(std::span<const std::complex<double>> nonneg_coeffs) {
  if (nonneg_coeffs.empty())
    throw std::invalid_argument("user_fourier: need at least c0");
  if (nonneg_coeffs[0].imag() != 0.0)
    throw std::invalid_argument("user_fourier: c0 must be real");
  std::vector<double> params{nonneg_coeffs[0].real()};
  for (std::size_t k = 1; k < nonneg_coeffs.size(); ++k) {
    params.push_back(nonneg_coeffs[k].real());
    params.push_back(nonneg_coeffs[k].imag());
  }
  return TestFunction(FunctionKind::UserFourier, std::move(params));
}

TestFunction TestFunction::from_name(std::string_view name) {
  if (name == "mixtgauss") return mixt_gauss();
  if (name == "heavisine") return heavi_sine();
  throw std::invalid_argument("unknown test function '" + std::string(name) + "'");
}

TestFunction TestFunction::with_sobolev(SobolevMeta meta) const {
  TestFunction copy = *this;
  copy.sobolev_ = meta;
  return copy;
}

TestFunction TestFunction::scaled(double factor) const {
  TestFunction copy = *this;
  switch (kind_) {
    case FunctionKind::MixtGauss:
      for (std::size_t i = 0; i < copy.params_.size(); i += 3) copy.params_[i] *= factor;
      break;
    case FunctionKind::HeaviSine:
      throw std::domain_error("scaled: HeaviSine jumps have fixed unit height");
    case FunctionKind::UserFourier:
      for (auto& p : copy.params_) p *= factor;
      break;
  }
  return copy;
}

double TestFunction::operator()(double t) const {
  const double u = wrap01(t);
  switch (kind_) {
    case FunctionKind::MixtGauss: {
      double sum = 0.0;
      for (std::size_t i = 0; i < params_.size(); i += 3) {
        const double a = params_[i], mu = params_[i + 1], w = params_[i + 2];
        for (int m = -kPeriodizationReach; m <= kPeriodizationReach; ++m) {
          const double x = u + m - mu;
          sum += a * std::exp(-x * x / (2.0 * w * w));
        }
      }
      return sum;
    }
    case FunctionKind::HeaviSine:
      return params_[0] * std::sin(2.0 * kTwoPi * u) - sgn(u - params_[1]) -
             sgn(params_[2] - u);
    case FunctionKind::UserFourier: {
      double sum = params_[0];
      for (std::size_t k = 1; 2 * k < params_.size() + 1; ++k) {
        const std::complex<double> c(params_[2 * k - 1], params_[2 * k]);
        sum += 2.0 * (c * std::polar(1.0, kTwoPi * static_cast<double>(k) * u)).real();
      }
      return sum;
    }
  }
  return 0.0;
}

double TestFunction::derivative(double t) const {
  const double u = wrap01(t);
  switch (kind_) {
    case FunctionKind::MixtGauss: {
      double sum = 0.0;
      for (std::size_t i = 0; i < params_.size(); i += 3) {
        const double a = params_[i], mu = params_[i + 1], w = params_[i + 2];
        for (int m = -kPeriodizationReach; m <= kPeriodizationReach; ++m) {
          const double x = u + m - mu;
          sum -= a * x / (w * w) * std::exp(-x * x / (2.0 * w * w));
        }
      }
      return sum;
    }
    case FunctionKind::HeaviSine:
      throw std::domain_error("derivative: HeaviSine has jumps");
    case FunctionKind::UserFourier: {
      double sum = 0.0;
      for (std::size_t k = 1; 2 * k < params_.size() + 1; ++k) {
        const std::complex<double> c(params_[2 * k - 1], params_[2 * k]);
        const double freq = kTwoPi * static_cast<double>(k);
        sum += 2.0 * (std::complex<double>(0.0, freq) * c *
                      std::polar(1.0, freq * u)).real();
      }
      return sum;
    }
  }
  return 0.0;
}

std::optional<std::vector<std::complex<double>>> TestFunction::exact_coefficients(
    std::size_t kmax) const {
  if (kind_ != FunctionKind::UserFourier) return std::nullopt;
  std::vector<std::complex<double>> out(kmax + 1);
  out[0] = params_[0];
  for (std::size_t k = 1; k <= kmax && 2 * k < params_.size() + 1; ++k)
    out[k] = {params_[2 * k - 1], params_[2 * k]};
  return out;
}

double eval_test_function(const TestFunction& f, double t) { return f(t); }

double centered_energy(const TestFunction& f, std::size_t nodes) {
  std::vector<double> values(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
    values[i] = f((static_cast<double>(i) + 0.5) / static_cast<double>(nodes));
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(nodes);
  double energy = 0.0;
  for (const double v : values) energy += (v - mean) * (v - mean);
  return energy / static_cast<double>(nodes);
}

std::vector<std::complex<double>> fourier_coefficients(const TestFunction& f,
                                                       std::size_t kmax,
                                                       std::size_t nodes) {
  if (auto exact = f.exact_coefficients(kmax)) return *exact;
  if (2 * kmax >= nodes)
    throw std::invalid_argument("fourier_coefficients: kmax beyond quadrature Nyquist");

  const double inv_nodes = 1.0 / static_cast<double>(nodes);
  std::vector<double> w_re(nodes), w_im(nodes, 0.0);
  for (std::size_t r = 0; r < nodes; ++r)
    w_re[r] = f((static_cast<double>(r) + 0.5) * inv_nodes);

  std::vector<double> x(kmax + 1), out_re(kmax + 1), out_im(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) x[k] = -static_cast<double>(k) * inv_nodes;
  simd::phasor_sum(w_re, w_im, x, out_re, out_im);

  std::vector<std::complex<double>> coeffs(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    // Midpoint nodes sit half a cell to the right of r / nodes.
    const auto half_cell = std::polar(1.0, -std::numbers::pi * static_cast<double>(k) * inv_nodes);
    coeffs[k] = std::complex<double>(out_re[k], out_im[k]) * half_cell * inv_nodes;
  }
  coeffs[0] = coeffs[0].real();
  return coeffs;
}

double derivative_energy(const TestFunction& f, std::size_t nodes) {
  switch (f.kind()) {
    case FunctionKind::HeaviSine:
      throw std::domain_error("derivative_energy: HeaviSine has jumps");
    case FunctionKind::UserFourier: {
      const auto& p = f.parameters();
      double sum = 0.0;
      for (std::size_t k = 1; 2 * k < p.size() + 1; ++k) {
        const double freq = kTwoPi * static_cast<double>(k);
        sum += 2.0 * freq * freq * (p[2 * k - 1] * p[2 * k - 1] + p[2 * k] * p[2 * k]);
      }
      return sum;
    }
    case FunctionKind::MixtGauss:
      break;
  }
  return midpoint_integral(
      [&f](double t) {
        const double d = f.derivative(t);
        return d * d;
      },
      nodes);
}

NoiseModel NoiseModel::from_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  NoiseModel m;
  m.sigma_ = sigma;
  return m;
}

NoiseModel NoiseModel::from_rsnr(double rsnr) {
  if (!(rsnr > 0.0) || !std::isfinite(rsnr))
    throw std::invalid_argument("rsnr must be finite and > 0");
  NoiseModel m;
  m.rsnr_ = rsnr;
  return m;
}

double NoiseModel::resolve(const TestFunction& f) const {
  return rsnr_ ? calibrate_sigma(f, *rsnr_) : sigma_;
}

double calibrate_sigma(const TestFunction& f, double rsnr) {
  if (!(rsnr > 0.0) || !std::isfinite(rsnr))
    throw std::invalid_argument("calibrate_sigma: rsnr must be > 0");
  const double energy = centered_energy(f);
  if (!(energy > 1e-300))
    throw std::domain_error("calibrate_sigma: constant function has no signal energy");
  return std::sqrt(energy) / rsnr;
}

ShiftLaw ShiftLaw::uniform(double half_width) {
  if (!(half_width > 0.0 && half_width <= kMaxHalfWidth))
    throw std::invalid_argument("uniform shift law: half_width must lie in (0, 1/16]");
  ShiftLaw law;
  law.kind_ = ShiftLawKind::UniformSymmetric;
  law.half_width_ = half_width;
  law.kappa_ = 2.0 * half_width;
  return law;
}

ShiftLaw ShiftLaw::user_density(double kappa, std::vector<double> density_nodes) {
  if (!(kappa > 0.0 && kappa <= 2.0 * kMaxHalfWidth))
    throw std::invalid_argument("user density: kappa must lie in (0, 1/8]");
  if (density_nodes.size() < 3)
    throw std::invalid_argument("user density: need at least 3 nodes");
  for (const double v : density_nodes)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("user density: values must be finite and >= 0");

  const double h = kappa / static_cast<double>(density_nodes.size() - 1);
  std::vector<double> cdf(density_nodes.size(), 0.0);
  for (std::size_t i = 1; i < density_nodes.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * h * (density_nodes[i - 1] + density_nodes[i]);
  const double mass = cdf.back();
  if (!(mass > 0.0)) throw std::invalid_argument("user density: zero total mass");
  for (auto& v : density_nodes) v /= mass;
  for (auto& c : cdf) c /= mass;

  ShiftLaw law;
  law.kind_ = ShiftLawKind::UserDensity;
  law.kappa_ = kappa;
  law.half_width_ = kappa / 2.0;
  law.nodes_ = std::move(density_nodes);
  law.cdf_ = std::move(cdf);
  return law;
}

ShiftLaw ShiftLaw::raised_cosine(double kappa, std::size_t nodes) {
  if (nodes < 3) throw std::invalid_argument("raised_cosine: need at least 3 nodes");
  std::vector<double> values(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = -kappa / 2.0 + kappa * static_cast<double>(i) / static_cast<double>(nodes - 1);
    const double c = std::cos(std::numbers::pi * x / kappa);
    values[i] = (2.0 / kappa) * c * c;
  }
  values.front() = 0.0;
  values.back() = 0.0;
  return user_density(kappa, std::move(values));
}

ShiftLaw ShiftLaw::point_mass(double location) {
  if (!(std::abs(location) <= kMaxHalfWidth))
    throw std::invalid_argument("point mass shift law: |location| must be <= 1/16");
  ShiftLaw law;
  law.kind_ = ShiftLawKind::PointMass;
  law.location_ = location;
  law.half_width_ = std::abs(location);
  law.kappa_ = 2.0 * std::abs(location);
  return law;
}

double ShiftLaw::sample(Rng& rng) const {
  switch (kind_) {
    case ShiftLawKind::PointMass:
      return location_;
    case ShiftLawKind::UniformSymmetric:
      return rng.uniform(-half_width_, half_width_);
    case ShiftLawKind::UserDensity:
      break;
  }
  // Inverse CDF of the piecewise-linear density.
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i =
      std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cdf_.begin(), 1)) - 1,
                            cdf_.size() - 2);
  const double h = kappa_ / static_cast<double>(nodes_.size() - 1);
  const double g0 = nodes_[i];
  const double slope = (nodes_[i + 1] - g0) / h;
  const double target = u - cdf_[i];
  double s = 0.0;
  if (std::abs(slope) < 1e-14 * std::max(1.0, g0)) {
    s = g0 > 0.0 ? target / g0 : 0.0;
  } else {
    // g0 s + slope s^2 / 2 = target, root in [0, h].
    const double disc = std::max(0.0, g0 * g0 + 2.0 * slope * target);
    s = 2.0 * target / (g0 + std::sqrt(disc));
  }
  s = std::clamp(s, 0.0, h);
  return std::clamp(-kappa_ / 2.0 + static_cast<double>(i) * h + s, -kappa_ / 2.0,
                    kappa_ / 2.0);
}

double ShiftLaw::density(double x) const {
  switch (kind_) {
    case ShiftLawKind::PointMass:
      throw std::domain_error("density: point mass has no density");
    case ShiftLawKind::UniformSymmetric:
      return std::abs(x) <= half_width_ ? 1.0 / (2.0 * half_width_) : 0.0;
    case ShiftLawKind::UserDensity:
      break;
  }
  if (x < -kappa_ / 2.0 || x > kappa_ / 2.0) return 0.0;
  const double h = kappa_ / static_cast<double>(nodes_.size() - 1);
  const double pos = (x + kappa_ / 2.0) / h;
  const auto i = std::min(static_cast<std::size_t>(pos), nodes_.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return nodes_[i] + frac * (nodes_[i + 1] - nodes_[i]);
}

std::optional<double> ShiftLaw::fisher_information() const {
  if (kind_ != ShiftLawKind::UserDensity) return std::nullopt;
  const double peak = *std::max_element(nodes_.begin(), nodes_.end());
  if (nodes_.front() > 1e-12 * peak || nodes_.back() > 1e-12 * peak) return std::nullopt;
  const double h = kappa_ / static_cast<double>(nodes_.size() - 1);
  double info = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double mid = 0.5 * (nodes_[i] + nodes_[i + 1]);
    if (mid <= 0.0) continue;
    const double d = (nodes_[i + 1] - nodes_[i]) / h;
    info += d * d / mid * h;
  }
  return info;
}

CurvePanel::CurvePanel(RealMatrix samples, std::optional<PanelTruth> truth)
    : samples_(std::move(samples)), truth_(std::move(truth)) {
  if (samples_.rows() < 4 || samples_.rows() % 2 != 0)
    throw std::invalid_argument("curve panel: n must be even and >= 4");
  if (samples_.cols() < 1) throw std::invalid_argument("curve panel: need at least one curve");
  if (truth_ && truth_->shifts.size() != samples_.cols())
    throw std::invalid_argument("curve panel: truth shifts length must equal J");
}

CurvePanel simulate_panel(const TestFunction& f, std::size_t n, std::size_t curves,
                          const ShiftLaw& law, const NoiseModel& noise,
                          std::uint64_t seed) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("simulate_panel: n must be even and >= 4");
  if (curves < 2) throw std::invalid_argument("simulate_panel: J must be >= 2");

  const double sigma = noise.resolve(f);
  Rng rng(seed);
  std::vector<double> shifts(curves);
  for (auto& s : shifts) s = law.sample(rng);

  RealMatrix samples(n, curves);
  for (std::size_t j = 0; j < curves; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i + 1) / static_cast<double>(n);
      samples(i, j) = f(t - shifts[j]);
    }
    if (sigma > 0.0)
      for (std::size_t i = 0; i < n; ++i) samples(i, j) += sigma * rng.normal();
  }
  return CurvePanel(std::move(samples), PanelTruth{std::move(shifts), f, sigma});
}

}  // namespace curvereg
