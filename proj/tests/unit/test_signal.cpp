#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvereg/rng.hpp"
#include "curvereg/signal.hpp"
#include "testkit.hpp"

using namespace curvereg;

namespace {

// Three periodized bumps written out independently of the library.
double mixt_gauss_ref(double t) {
  const double p[3][3] = {{1.0, 0.25, 0.03}, {0.8, 0.5, 0.05}, {1.2, 0.75, 0.03}};
  t -= std::floor(t);
  double s = 0.0;
  for (const auto& b : p)
    for (int m = -2; m <= 2; ++m) s += b[0] * std::exp(-std::pow(t + m - b[1], 2) / (2 * b[2] * b[2]));
  return s;
}

double centered_energy_ref(double (*f)(double), std::size_t nodes) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double v = f((i + 0.5) / static_cast<double>(nodes));
    s += v;
    s2 += v * v;
  }
  const double mean = s / nodes;
  return s2 / nodes - mean * mean;
}

}  // namespace

TEST(TestFunction, Periodic) {
  testkit::Gen gen(3);
  const std::complex<double> uf[] = {0.5, {0.2, -0.1}, {0.0, 0.3}};
  for (const auto& f : {TestFunction::mixt_gauss(), TestFunction::heavi_sine(),
                        TestFunction::user_fourier(uf)}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = gen.uniform(-3.0, 3.0);
      worst = std::max(worst, std::abs(f(t) - f(t + 1.0)));
    }
    EXPECT_LT(worst, 1e-12) << to_string(f.kind());
  }
}

TEST(TestFunction, MixtGaussMatchesClosedForm) {
  const auto f = TestFunction::mixt_gauss();
  for (double t : {0.0, 0.1, 0.25, 0.5, 0.75, 0.99, -0.3, 1.7})
    EXPECT_NEAR(f(t), mixt_gauss_ref(t), 1e-14);
}

TEST(TestFunction, HeaviSineAtFirstJump) {
  // 4 sin(1.2 pi) - sgn(0) - sgn(0.42), with sin(pi/5) = sqrt(10 - 2 sqrt 5) / 4.
  const double want = -4.0 * std::sqrt(10.0 - 2.0 * std::sqrt(5.0)) / 4.0 - 1.0;
  EXPECT_NEAR(want, -3.3511410091698925, 1e-15);
  EXPECT_NEAR(eval_test_function(TestFunction::heavi_sine(), 0.3), want, 1e-14);
  // Between the jumps both signs agree: 4 sin(4 pi 0.5) - 1 - 1 = -2.
  EXPECT_NEAR(TestFunction::heavi_sine()(0.5), -2.0, 1e-14);
}

TEST(TestFunction, ConstantUserSeries) {
  const std::complex<double> c[] = {1.0};
  const auto f = TestFunction::user_fourier(c);
  for (double t : {-4.2, 0.0, 0.3, 0.999}) EXPECT_EQ(f(t), 1.0);
}

TEST(TestFunction, DerivativeMatchesFiniteDifference) {
  const auto f = TestFunction::mixt_gauss();
  for (double t : {0.1, 0.26, 0.48, 0.77}) {
    const double h = 1e-6;
    EXPECT_NEAR(f.derivative(t), (f(t + h) - f(t - h)) / (2 * h), 1e-5);
  }
  EXPECT_THROW(TestFunction::heavi_sine().derivative(0.1), std::domain_error);
}

TEST(TestFunction, FirstCoefficientIsNonzero) {
  for (const auto& f : {TestFunction::mixt_gauss(), TestFunction::heavi_sine()}) {
    const auto c = fourier_coefficients(f, 1);
    EXPECT_GT(std::abs(c[1]), 1e-3) << to_string(f.kind());
  }
}

TEST(TestFunction, QuadratureCoefficientsAgreeWithDirectSum) {
  const auto f = TestFunction::mixt_gauss();
  const auto c = fourier_coefficients(f, 12);
  const std::size_t nodes = 1 << 14;
  for (int k = 0; k <= 12; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      const double t = (i + 0.5) / nodes;
      s += f(t) * std::polar(1.0, -testkit::kTwoPi * k * t);
    }
    s /= static_cast<double>(nodes);
    EXPECT_LT(std::abs(c[static_cast<std::size_t>(k)] - s), 1e-13) << k;
  }
}

TEST(TestFunction, ScalingAndNames) {
  const auto f = TestFunction::mixt_gauss();
  EXPECT_NEAR(f.scaled(2.0)(0.3), 2.0 * f(0.3), 1e-14);
  EXPECT_EQ(TestFunction::from_name("heavisine").kind(), FunctionKind::HeaviSine);
  EXPECT_THROW(TestFunction::from_name("sawtooth"), std::invalid_argument);
  EXPECT_THROW(TestFunction::mixt_gauss({1.0, 0.5}), std::invalid_argument);
  const auto meta = f.with_sobolev({2.0, 10.0}).sobolev();
  ASSERT_TRUE(meta.has_value());
  EXPECT_EQ(meta->smoothness, 2.0);
}

TEST(CalibrateSigma, UnitEnergyGivesTwo) {
  // c0 + sqrt(2) cos(2 pi t) has centered energy exactly 1.
  const std::complex<double> c[] = {3.0, 1.0 / std::sqrt(2.0)};
  EXPECT_NEAR(calibrate_sigma(TestFunction::user_fourier(c), 0.5), 2.0, 1e-12);
}

TEST(CalibrateSigma, MixtGaussAgreesAtDoubleResolution) {
  const double sigma = calibrate_sigma(TestFunction::mixt_gauss(), 0.5);
  const double ref = std::sqrt(centered_energy_ref(mixt_gauss_ref, 1 << 15)) / 0.5;
  EXPECT_LT(std::abs(sigma - ref) / ref, 1e-6);
  EXPECT_NEAR(sigma, 0.680845, 1e-6);
}

TEST(CalibrateSigma, Errors) {
  const std::complex<double> c[] = {2.0};
  EXPECT_THROW(calibrate_sigma(TestFunction::user_fourier(c), 0.5), std::domain_error);
  EXPECT_THROW(calibrate_sigma(TestFunction::mixt_gauss(), 0.0), std::invalid_argument);
  EXPECT_THROW(NoiseModel::from_sigma(-1.0), std::invalid_argument);
  EXPECT_THROW(NoiseModel::from_rsnr(-1.0), std::invalid_argument);
}

TEST(NoiseModel, ExactlyOneDefinition) {
  const auto direct = NoiseModel::from_sigma(0.7);
  EXPECT_FALSE(direct.is_rsnr());
  EXPECT_EQ(direct.resolve(TestFunction::mixt_gauss()), 0.7);
  const auto derived = NoiseModel::from_rsnr(0.5);
  EXPECT_TRUE(derived.is_rsnr());
  EXPECT_EQ(derived.resolve(TestFunction::mixt_gauss()), calibrate_sigma(TestFunction::mixt_gauss(), 0.5));
}

TEST(ShiftLaw, UniformSupportAndMean) {
  const auto law = ShiftLaw::uniform(1.0 / 16.0);
  EXPECT_EQ(law.kappa(), 0.125);
  Rng rng(9);
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = law.sample(rng);
    ASSERT_LE(std::abs(x), 1.0 / 16.0);
    s += x;
  }
  const double se = (1.0 / 16.0) / std::sqrt(3.0) / std::sqrt(static_cast<double>(n));
  EXPECT_LT(std::abs(s / n), 3.0 * se);
  EXPECT_FALSE(law.fisher_information().has_value());
}

TEST(ShiftLaw, Validation) {
  EXPECT_THROW(ShiftLaw::uniform(0.0), std::invalid_argument);
  EXPECT_THROW(ShiftLaw::uniform(0.07), std::invalid_argument);
  EXPECT_THROW(ShiftLaw::user_density(0.2, {0, 1, 0}), std::invalid_argument);
  EXPECT_THROW(ShiftLaw::user_density(0.1, {0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(ShiftLaw::point_mass(0.1), std::invalid_argument);
}

TEST(ShiftLaw, RaisedCosineFisherInformation) {
  // int (g')^2 / g for (2/kappa) cos^2(pi x / kappa) is 4 pi^2 / kappa^2.
  const double kappa = 0.1;
  const auto law = ShiftLaw::raised_cosine(kappa);
  const auto info = law.fisher_information();
  ASSERT_TRUE(info.has_value());
  const double want = 4.0 * std::numbers::pi * std::numbers::pi / (kappa * kappa);
  EXPECT_LT(std::abs(*info - want) / want, 1e-3);
  EXPECT_NEAR(law.density(0.0), 2.0 / kappa, 1e-3);
}

TEST(ShiftLaw, UserDensitySamplesFollowDensity) {
  const double kappa = 0.1;
  const auto law = ShiftLaw::raised_cosine(kappa);
  Rng rng(4);
  const int n = 100000;
  int inner = 0;
  for (int i = 0; i < n; ++i) {
    const double x = law.sample(rng);
    ASSERT_LE(std::abs(x), kappa / 2.0);
    if (std::abs(x) < kappa / 4.0) ++inner;
  }
  // P(|x| < kappa/4) = 1/2 + 1/pi for the raised cosine.
  const double p = 0.5 + 1.0 / std::numbers::pi;
  EXPECT_NEAR(static_cast<double>(inner) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Simulate, NoiselessUnshifted) {
  const auto f = TestFunction::mixt_gauss();
  const auto panel = simulate_panel(f, 64, 3, ShiftLaw::point_mass(0.0), NoiseModel::from_sigma(0.0), 1);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 64; ++i) ASSERT_EQ(panel.samples()(i, j), f((i + 1) / 64.0));
}

TEST(Simulate, GridAlignedShiftRelabelsRows) {
  const auto f = TestFunction::heavi_sine();
  const std::size_t n = 64;
  const auto base = simulate_panel(f, n, 2, ShiftLaw::point_mass(0.0), NoiseModel::from_sigma(0.0), 1);
  const auto moved = simulate_panel(f, n, 2, ShiftLaw::point_mass(1.0 / n), NoiseModel::from_sigma(0.0), 1);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < n; ++i)
      ASSERT_EQ(moved.samples()(i, j), base.samples()((i + n - 1) % n, j)) << i;
}

TEST(Simulate, DeterministicPerSeed) {
  const auto f = TestFunction::mixt_gauss();
  const auto law = ShiftLaw::uniform(1.0 / 16.0);
  const auto a = simulate_panel(f, 128, 5, law, NoiseModel::from_rsnr(0.5), 42);
  const auto b = simulate_panel(f, 128, 5, law, NoiseModel::from_rsnr(0.5), 42);
  const auto c = simulate_panel(f, 128, 5, law, NoiseModel::from_rsnr(0.5), 43);
  EXPECT_EQ(a.samples(), b.samples());
  EXPECT_EQ(a.truth()->shifts, b.truth()->shifts);
  EXPECT_NE(a.samples(), c.samples());
}

TEST(Simulate, Preconditions) {
  const auto f = TestFunction::mixt_gauss();
  const auto law = ShiftLaw::uniform(0.05);
  EXPECT_THROW(simulate_panel(f, 63, 4, law, NoiseModel::from_sigma(1), 1), std::invalid_argument);
  EXPECT_THROW(simulate_panel(f, 2, 4, law, NoiseModel::from_sigma(1), 1), std::invalid_argument);
  EXPECT_THROW(simulate_panel(f, 64, 1, law, NoiseModel::from_sigma(1), 1), std::invalid_argument);
}

TEST(Simulate, NoiseCalibrationReproducesRsnr) {
  const auto f = TestFunction::mixt_gauss();
  const std::size_t n = 1000, curves = 1000;
  const auto panel = simulate_panel(f, n, curves, ShiftLaw::uniform(1.0 / 16.0), NoiseModel::from_rsnr(0.5), 77);
  double ss = 0.0;
  for (std::size_t j = 0; j < curves; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double resid = panel.samples()(i, j) - f(panel.design(i) - panel.truth()->shifts[j]);
      ss += resid * resid;
    }
  const double sigma_hat = std::sqrt(ss / static_cast<double>(n * curves));
  const double rsnr_hat = std::sqrt(centered_energy(f)) / sigma_hat;
  EXPECT_LT(std::abs(rsnr_hat - 0.5) / 0.5, 0.01);
}

TEST(Simulate, ShiftsStayInSupport) {
  const auto panel = simulate_panel(TestFunction::mixt_gauss(), 16, 500, ShiftLaw::uniform(0.03),
                                    NoiseModel::from_sigma(0.1), 5);
  for (double s : panel.truth()->shifts) EXPECT_LE(std::abs(s), 0.03);
}
