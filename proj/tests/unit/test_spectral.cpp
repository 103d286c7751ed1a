#include <gtest/gtest.h>

#include <cmath>

#include "curvereg/signal.hpp"
#include "curvereg/spectral.hpp"
#include "testkit.hpp"

using namespace curvereg;
using testkit::Complex;

namespace {

CurvePanel panel_from(std::size_t n, std::size_t curves, auto&& fill) {
  RealMatrix m(n, curves);
  for (std::size_t j = 0; j < curves; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = fill(i, j);
  return CurvePanel(std::move(m));
}

std::vector<double> design_of(const HalfPanel& h) {
  std::vector<double> t(h.half_size());
  for (std::size_t q = 0; q < t.size(); ++q) t[q] = h.design(q);
  return t;
}

}  // namespace

TEST(Split, FourRowsGoToTheirParity) {
  // Row i holds t_{i+1}; value = design index l.
  const auto panel = panel_from(4, 1, [](std::size_t i, std::size_t) { return i + 1.0; });
  const auto [even, odd] = split_samples(panel);
  EXPECT_EQ(even.samples()(0, 0), 2.0);
  EXPECT_EQ(even.samples()(1, 0), 4.0);
  EXPECT_EQ(odd.samples()(0, 0), 1.0);
  EXPECT_EQ(odd.samples()(1, 0), 3.0);
  EXPECT_EQ(even.design(0), 0.5);
  EXPECT_EQ(odd.design(0), 0.25);
}

TEST(Split, MergeRestoresPanel) {
  testkit::Gen gen(1);
  const auto panel = panel_from(32, 3, [&](std::size_t, std::size_t) { return gen.normal(); });
  const auto [even, odd] = split_samples(panel);
  EXPECT_EQ(merge_halves(even, odd), panel.samples());
  EXPECT_THROW(merge_halves(odd, even), std::invalid_argument);
}

TEST(Split, ConstantPanelGivesConstantHalves) {
  const auto panel = panel_from(6, 2, [](std::size_t, std::size_t) { return 2.5; });
  const auto [even, odd] = split_samples(panel);
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_EQ(even.samples()(q, 1), 2.5);
    EXPECT_EQ(odd.samples()(q, 0), 2.5);
  }
}

TEST(Coefficients, ConstantIsDcOnly) {
  const auto panel = panel_from(32, 2, [](std::size_t, std::size_t) { return 1.75; });
  const auto spec = empirical_coefficients(split_samples(panel).first);
  for (int k = spec.min_frequency(); k <= spec.max_frequency(); ++k)
    EXPECT_LT(std::abs(spec(k, 1) - Complex(k == 0 ? 1.75 : 0.0)), 1e-14) << k;
}

TEST(Coefficients, CosineOnEvenDesign) {
  const std::size_t n = 64;
  const auto panel = panel_from(n, 1, [&](std::size_t i, std::size_t) {
    return std::cos(testkit::kTwoPi * static_cast<double>(i + 1) / n);
  });
  const auto spec = empirical_coefficients(split_samples(panel).first);
  for (int k = spec.min_frequency(); k <= spec.max_frequency(); ++k)
    EXPECT_LT(std::abs(spec(k, 0) - Complex(std::abs(k) == 1 ? 0.5 : 0.0)), 1e-14) << k;
}

TEST(Coefficients, MatchDirectSummationBothParities) {
  testkit::Gen gen(2);
  const auto panel = panel_from(128, 4, [&](std::size_t, std::size_t) { return gen.normal(); });
  const auto [even, odd] = split_samples(panel);
  for (const HalfPanel* h : {&even, &odd}) {
    const auto spec = empirical_coefficients(*h);
    const auto t = design_of(*h);
    for (std::size_t j = 0; j < 4; ++j)
      for (int k = spec.min_frequency(); k <= spec.max_frequency(); ++k)
        EXPECT_LT(std::abs(spec(k, j) - testkit::direct_coefficient(h->samples().column(j), t, k)), 1e-10);
  }
}

TEST(Coefficients, ConjugateSymmetricAndParseval) {
  testkit::Gen gen(3);
  const auto panel = panel_from(64, 3, [&](std::size_t, std::size_t) { return gen.normal(); });
  const auto [even, odd] = split_samples(panel);
  for (const HalfPanel* h : {&even, &odd}) {
    const auto spec = empirical_coefficients(*h);
    for (std::size_t j = 0; j < 3; ++j) {
      double energy = 0.0, samples = 0.0;
      for (int k = spec.min_frequency(); k <= spec.max_frequency(); ++k) {
        energy += std::norm(spec(k, j));
        if (k > spec.min_frequency()) EXPECT_LT(std::abs(spec(-k, j) - std::conj(spec(k, j))), 1e-14);
      }
      for (double y : h->samples().column(j)) samples += y * y;
      samples /= static_cast<double>(h->half_size());
      EXPECT_LT(std::abs(energy - samples) / samples, 1e-10);
    }
  }
  EXPECT_THROW((void)empirical_coefficients(even).at(100, 0), std::out_of_range);
}

TEST(MeanEstimate, Invariants) {
  EXPECT_THROW(MeanEstimate({Complex(1.0), Complex(2.0)}), std::invalid_argument);
  EXPECT_THROW(MeanEstimate({Complex(1.0, 1.0), Complex(0.5), Complex(1.0, 1.0)}), std::invalid_argument);
  const auto est = MeanEstimate::from_nonnegative(std::vector<Complex>{2.0, {0.5, -0.25}});
  EXPECT_EQ(est.cutoff(), 1);
  EXPECT_EQ(est.coeff(-1), Complex(0.5, 0.25));
  EXPECT_EQ(est.coeff(5), Complex(0.0));
  EXPECT_EQ(est.truncated(3).cutoff(), 3);
  EXPECT_EQ(est.truncated(0).coeff(1), Complex(0.0));
}

TEST(Reconstruct, ConstantAndCosine) {
  testkit::Gen gen(4);
  const auto grid = gen.uniform_vector(1000, -1.0, 2.0);
  const auto one = reconstruct(MeanEstimate::from_nonnegative(std::vector<Complex>{1.0}), grid);
  for (double v : one) EXPECT_NEAR(v, 1.0, 1e-15);
  const auto cosine = reconstruct(MeanEstimate::from_nonnegative(std::vector<Complex>{0.0, 0.5}), grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_NEAR(cosine[i], std::cos(testkit::kTwoPi * grid[i]), 1e-12);
}

TEST(Reconstruct, InterpolatesBandLimitedSamples) {
  const std::size_t n = 128;
  const auto f = TestFunction::mixt_gauss();
  const auto panel = panel_from(n, 1, [&](std::size_t i, std::size_t) { return f((i + 1.0) / n); });
  const auto [even, odd] = split_samples(panel);
  const auto spec = empirical_coefficients(odd);
  const int m = spec.max_frequency();
  std::vector<Complex> nonneg(static_cast<std::size_t>(m + 1));
  for (int k = 0; k <= m; ++k) nonneg[static_cast<std::size_t>(k)] = spec(k, 0);
  nonneg[0] = nonneg[0].real();
  const auto est = MeanEstimate::from_nonnegative(nonneg);
  const auto t = design_of(odd);
  const auto got = reconstruct(est, t);
  for (std::size_t q = 0; q < t.size(); ++q) {
    Complex want = 0.0;  // direct series evaluation
    for (int k = -m; k <= m; ++k) want += spec(k, 0) * std::polar(1.0, testkit::kTwoPi * k * t[q]);
    EXPECT_NEAR(got[q], want.real(), 1e-12);
    EXPECT_LT(std::abs(want.imag()), 1e-12);
  }
}

TEST(OrbitDistance, SelfAndShifted) {
  testkit::Gen gen(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = gen.mean_estimate(8);
    const auto self = orbit_distance(a, a);
    EXPECT_LT(self.distance, 1e-9);
    EXPECT_LT(std::abs(self.shift), 1e-9);
    const double tau = gen.uniform(-0.4, 0.4);
    // a(. + tau): the aligning shift is -tau.
    const auto r = orbit_distance(a, a.shifted(-tau));
    EXPECT_LT(r.distance, 1e-8);
    const double gap = std::remainder(r.shift + tau, 1.0);
    EXPECT_LT(std::abs(gap), 1e-8);
  }
}

TEST(OrbitDistance, MatchesDenseGrid) {
  testkit::Gen gen(6);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = gen.mean_estimate(8), b = gen.mean_estimate(8);
    const auto r = orbit_distance(a, b);
    const double dense = testkit::dense_orbit_distance(a, b, 200000);
    EXPECT_LE(r.distance, dense + 1e-12);
    EXPECT_NEAR(r.distance, dense, 1e-7);
    EXPECT_NEAR(std::sqrt(testkit::shifted_distance_sq(a, b, r.shift)), r.distance, 1e-12);
  }
}

TEST(OrbitDistance, DifferentCutoffsArePadded) {
  testkit::Gen gen(7);
  const auto a = gen.mean_estimate(3), b = gen.mean_estimate(9);
  const auto r = orbit_distance(a, b);
  EXPECT_NEAR(r.distance, testkit::dense_orbit_distance(a, b, 100000), 1e-6);
  EXPECT_NEAR(r.distance, orbit_distance(b, a).distance, 1e-9);
}

TEST(OrbitDistance, PseudometricProperties) {
  testkit::Gen gen(8);
  for (int rep = 0; rep < 30; ++rep) {
    const auto a = gen.mean_estimate(6), b = gen.mean_estimate(6), c = gen.mean_estimate(6);
    const double ab = orbit_distance(a, b).distance;
    EXPECT_NEAR(ab, orbit_distance(b, a).distance, 1e-9);
    EXPECT_LE(orbit_distance(a, c).distance, ab + orbit_distance(b, c).distance + 1e-9);
    const double tau = gen.uniform(-0.5, 0.5);
    EXPECT_NEAR(orbit_distance(a.shifted(tau), b).distance, ab, 1e-9);
  }
}
