#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "curvereg/simd.hpp"
#include "testkit.hpp"

namespace simd = curvereg::simd;
using testkit::Complex;

namespace {

struct IsaGuard {
  ~IsaGuard() { simd::unpin_isa(); }
};

struct PhasorCase {
  std::vector<double> w_re, w_im, x;
};

PhasorCase random_case(testkit::Gen& gen, std::size_t terms, std::size_t points) {
  PhasorCase c;
  c.w_re = gen.uniform_vector(terms, -1.0, 1.0);
  c.w_im = gen.uniform_vector(terms, -1.0, 1.0);
  c.x = gen.uniform_vector(points, -2.0, 2.0);
  return c;
}

std::vector<Complex> direct_phasor(const PhasorCase& c) {
  std::vector<Complex> out(c.x.size());
  for (std::size_t p = 0; p < c.x.size(); ++p)
    for (std::size_t r = 0; r < c.w_re.size(); ++r)
      out[p] += Complex(c.w_re[r], c.w_im[r]) *
                std::polar(1.0, testkit::kTwoPi * static_cast<double>(r) * c.x[p]);
  return out;
}

std::vector<Complex> run_phasor(const PhasorCase& c, simd::Isa isa) {
  IsaGuard guard;
  simd::pin_isa(isa);
  std::vector<double> re(c.x.size()), im(c.x.size());
  simd::phasor_sum(c.w_re, c.w_im, c.x, re, im);
  std::vector<Complex> out(c.x.size());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = {re[p], im[p]};
  return out;
}

}  // namespace

TEST(Simd, ScalarPhasorMatchesDirectSum) {
  testkit::Gen gen(11);
  for (std::size_t terms : {1u, 2u, 31u, 32u, 33u, 100u, 513u}) {
    const auto c = random_case(gen, terms, 37);
    const auto want = direct_phasor(c);
    const auto got = run_phasor(c, simd::Isa::Scalar);
    for (std::size_t p = 0; p < want.size(); ++p)
      EXPECT_LT(std::abs(got[p] - want[p]), 1e-12 * static_cast<double>(terms)) << terms;
  }
}

TEST(Simd, Avx2PhasorMatchesScalar) {
  if (!simd::avx2_available()) GTEST_SKIP() << "no AVX2 on this machine";
  testkit::Gen gen(12);
  // Point counts around the 4-lane width exercise the scalar tail.
  for (std::size_t points : {1u, 3u, 4u, 5u, 7u, 8u, 9u, 64u, 1023u}) {
    for (std::size_t terms : {1u, 17u, 32u, 65u, 300u}) {
      const auto c = random_case(gen, terms, points);
      const auto a = run_phasor(c, simd::Isa::Scalar);
      const auto b = run_phasor(c, simd::Isa::Avx2);
      for (std::size_t p = 0; p < points; ++p)
        EXPECT_LT(std::abs(a[p] - b[p]), 1e-13 * static_cast<double>(terms))
            << "points=" << points << " terms=" << terms;
    }
  }
}

TEST(Simd, CmulAccumulateVariantsAgree) {
  testkit::Gen gen(13);
  for (std::size_t len : {1u, 4u, 5u, 31u, 257u}) {
    const auto a_re = gen.uniform_vector(len, -1, 1), a_im = gen.uniform_vector(len, -1, 1);
    const auto b_re = gen.uniform_vector(len, -1, 1), b_im = gen.uniform_vector(len, -1, 1);
    const auto init_re = gen.uniform_vector(len, -1, 1), init_im = gen.uniform_vector(len, -1, 1);

    std::vector<double> s_re = init_re, s_im = init_im;
    simd::scalar::cmul_accumulate(a_re, a_im, b_re, b_im, s_re, s_im);
    for (std::size_t i = 0; i < len; ++i) {
      const Complex want = Complex(init_re[i], init_im[i]) +
                           Complex(a_re[i], a_im[i]) * Complex(b_re[i], b_im[i]);
      EXPECT_NEAR(s_re[i], want.real(), 1e-15);
      EXPECT_NEAR(s_im[i], want.imag(), 1e-15);
    }
    if (!simd::avx2_available()) continue;
    IsaGuard guard;
    simd::pin_isa(simd::Isa::Avx2);
    std::vector<double> v_re = init_re, v_im = init_im;
    simd::cmul_accumulate(a_re, a_im, b_re, b_im, v_re, v_im);
    for (std::size_t i = 0; i < len; ++i) {
      EXPECT_NEAR(v_re[i], s_re[i], 1e-15);
      EXPECT_NEAR(v_im[i], s_im[i], 1e-15);
    }
  }
}

TEST(Simd, PinningControlsDispatch) {
  IsaGuard guard;
  simd::pin_isa(simd::Isa::Scalar);
  EXPECT_EQ(simd::active_isa(), simd::Isa::Scalar);
  simd::pin_isa(simd::Isa::Avx2);
  EXPECT_EQ(simd::active_isa(), simd::avx2_available() ? simd::Isa::Avx2 : simd::Isa::Scalar);
  simd::unpin_isa();
  EXPECT_EQ(simd::active_isa(), simd::avx2_available() ? simd::Isa::Avx2 : simd::Isa::Scalar);
  EXPECT_EQ(simd::isa_name(simd::Isa::Scalar), "scalar");
  EXPECT_EQ(simd::isa_name(simd::Isa::Avx2), "avx2");
}

TEST(Simd, LengthMismatchIsRejected) {
  std::vector<double> w(3), x(4), out(3), out2(4);
  EXPECT_THROW(simd::phasor_sum(w, std::vector<double>(2), x, out2, out2), std::invalid_argument);
  EXPECT_THROW(simd::phasor_sum(w, w, x, out, out2), std::invalid_argument);
  EXPECT_THROW(simd::cmul_accumulate(w, w, x, w, w, w), std::invalid_argument);
}

TEST(Simd, LongSeriesStaysAccurate) {
  // Recurrence drift is bounded by the periodic reseed; 4096 terms.
  PhasorCase c;
  c.w_re.assign(4096, 1.0 / 4096.0);
  c.w_im.assign(4096, 0.0);
  c.x = {0.123456789, 0.5, 1.0 / 3.0, 0.999};
  const auto want = direct_phasor(c);
  for (auto isa : {simd::Isa::Scalar, simd::Isa::Avx2}) {
    const auto got = run_phasor(c, isa);
    for (std::size_t p = 0; p < want.size(); ++p) EXPECT_LT(std::abs(got[p] - want[p]), 1e-12);
  }
}
