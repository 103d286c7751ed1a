#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace curvereg::simd::detail {

// Fractional part in [0, 1); keeps trig arguments small so r * x stays
// accurate for large r.
inline double frac(double v) noexcept { return v - std::floor(v); }

inline void check_phasor_args(std::span<const double> w_re,
                              std::span<const double> w_im,
                              std::span<const double> x,
                              std::span<double> out_re,
                              std::span<double> out_im) {
  if (w_re.size() != w_im.size())
    throw std::invalid_argument("phasor_sum: weight real/imag length mismatch");
  if (out_re.size() != x.size() || out_im.size() != x.size())
    throw std::invalid_argument("phasor_sum: output length must match points");
}

inline void check_cmul_args(std::span<const double> a_re,
                            std::span<const double> a_im,
                            std::span<const double> b_re,
                            std::span<const double> b_im,
                            std::span<double> acc_re, std::span<double> acc_im) {
  const auto n = a_re.size();
  if (a_im.size() != n || b_re.size() != n || b_im.size() != n ||
      acc_re.size() != n || acc_im.size() != n)
    throw std::invalid_argument("cmul_accumulate: length mismatch");
}

}  // namespace curvereg::simd::detail
