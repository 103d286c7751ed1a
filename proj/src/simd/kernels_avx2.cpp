// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <array>
#include <cmath>
#include <numbers>

#include "curvereg/simd.hpp"
#include "kernel_checks.hpp"

namespace curvereg::simd::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

struct LanePhasor {
  __m256d c;
  __m256d s;
};

inline LanePhasor exact_phasor(const double* x, double r) {
  alignas(32) std::array<double, kLanes> c{};
  alignas(32) std::array<double, kLanes> s{};
  for (std::size_t l = 0; l < kLanes; ++l) {
    const double angle = 2.0 * std::numbers::pi * detail::frac(r * x[l]);
    c[l] = std::cos(angle);
    s[l] = std::sin(angle);
  }
  return {_mm256_load_pd(c.data()), _mm256_load_pd(s.data())};
}

}  // namespace

void phasor_sum(std::span<const double> w_re, std::span<const double> w_im,
                std::span<const double> x, std::span<double> out_re,
                std::span<double> out_im) {
  detail::check_phasor_args(w_re, w_im, x, out_re, out_im);
  const std::size_t terms = w_re.size();
  const std::size_t points = x.size();
  const std::size_t vec_end = points - points % kLanes;

  for (std::size_t p = 0; p < vec_end; p += kLanes) {
    const LanePhasor step = exact_phasor(&x[p], 1.0);
    __m256d c = _mm256_set1_pd(1.0);
    __m256d s = _mm256_setzero_pd();
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t r = 0; r < terms; ++r) {
      if (r % kPhasorReseed == 0 && r != 0) {
        const LanePhasor seed = exact_phasor(&x[p], static_cast<double>(r));
        c = seed.c;
        s = seed.s;
      }
      const __m256d wr = _mm256_set1_pd(w_re[r]);
      const __m256d wi = _mm256_set1_pd(w_im[r]);
      acc_re = _mm256_fmadd_pd(wr, c, acc_re);
      acc_re = _mm256_fnmadd_pd(wi, s, acc_re);
      acc_im = _mm256_fmadd_pd(wr, s, acc_im);
      acc_im = _mm256_fmadd_pd(wi, c, acc_im);
      const __m256d next_c = _mm256_fmsub_pd(c, step.c, _mm256_mul_pd(s, step.s));
      s = _mm256_fmadd_pd(s, step.c, _mm256_mul_pd(c, step.s));
      c = next_c;
    }
    _mm256_storeu_pd(&out_re[p], acc_re);
    _mm256_storeu_pd(&out_im[p], acc_im);
  }

  if (vec_end < points) {
    scalar::phasor_sum(w_re, w_im, x.subspan(vec_end), out_re.subspan(vec_end),
                       out_im.subspan(vec_end));
  }
}

void cmul_accumulate(std::span<const double> a_re, std::span<const double> a_im,
                     std::span<const double> b_re, std::span<const double> b_im,
                     std::span<double> acc_re, std::span<double> acc_im) {
  detail::check_cmul_args(a_re, a_im, b_re, b_im, acc_re, acc_im);
  const std::size_t n = a_re.size();
  const std::size_t vec_end = n - n % kLanes;
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    const __m256d ar = _mm256_loadu_pd(&a_re[i]);
    const __m256d ai = _mm256_loadu_pd(&a_im[i]);
    const __m256d br = _mm256_loadu_pd(&b_re[i]);
    const __m256d bi = _mm256_loadu_pd(&b_im[i]);
    __m256d re = _mm256_loadu_pd(&acc_re[i]);
    __m256d im = _mm256_loadu_pd(&acc_im[i]);
    re = _mm256_add_pd(re, _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi)));
    im = _mm256_add_pd(im, _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br)));
    _mm256_storeu_pd(&acc_re[i], re);
    _mm256_storeu_pd(&acc_im[i], im);
  }
  for (std::size_t i = vec_end; i < n; ++i) {
    acc_re[i] += a_re[i] * b_re[i] - a_im[i] * b_im[i];
    acc_im[i] += a_re[i] * b_im[i] + a_im[i] * b_re[i];
  }
}

}  // namespace curvereg::simd::avx2
