#include <cmath>
#include <numbers>

#include "curvereg/simd.hpp"
#include "kernel_checks.hpp"

namespace curvereg::simd::scalar {

void phasor_sum(std::span<const double> w_re, std::span<const double> w_im,
                std::span<const double> x, std::span<double> out_re,
                std::span<double> out_im) {
  detail::check_phasor_args(w_re, w_im, x, out_re, out_im);
  const std::size_t terms = w_re.size();
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double step_c = std::cos(2.0 * std::numbers::pi * detail::frac(x[p]));
    const double step_s = std::sin(2.0 * std::numbers::pi * detail::frac(x[p]));
    double acc_re = 0.0;
    double acc_im = 0.0;
    double c = 1.0;
    double s = 0.0;
    for (std::size_t r = 0; r < terms; ++r) {
      if (r % kPhasorReseed == 0 && r != 0) {
        const double angle =
            2.0 * std::numbers::pi * detail::frac(static_cast<double>(r) * x[p]);
        c = std::cos(angle);
        s = std::sin(angle);
      }
      acc_re += w_re[r] * c - w_im[r] * s;
      acc_im += w_re[r] * s + w_im[r] * c;
      const double next_c = c * step_c - s * step_s;
      s = s * step_c + c * step_s;
      c = next_c;
    }
    out_re[p] = acc_re;
    out_im[p] = acc_im;
  }
}

void cmul_accumulate(std::span<const double> a_re, std::span<const double> a_im,
                     std::span<const double> b_re, std::span<const double> b_im,
                     std::span<double> acc_re, std::span<double> acc_im) {
  detail::check_cmul_args(a_re, a_im, b_re, b_im, acc_re, acc_im);
  for (std::size_t i = 0; i < a_re.size(); ++i) {
    acc_re[i] += a_re[i] * b_re[i] - a_im[i] * b_im[i];
    acc_im[i] += a_re[i] * b_im[i] + a_im[i] * b_re[i];
  }
}

}  // namespace curvereg::simd::scalar
