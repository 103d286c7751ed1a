#pragma once

// Data-parallel inner loops shared by the spectral, frechet and experiment
// modules. Every kernel has a portable scalar reference and, on x86-64, an
// AVX2/FMA variant. The variant is picked once at runtime from CPUID and can
// be pinned for equivalence testing.

#include <cstddef>
#include <span>
#include <string_view>

namespace curvereg::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the binary carries the AVX2 variant and the CPU supports it.
bool avx2_available() noexcept;

/// Best variant for this machine, unless overridden by `pin_isa`.
Isa active_isa() noexcept;

/// Overrides the runtime selection (tests and benchmarks). Pinning `Avx2` on
/// a machine without it falls back to `Scalar`.
void pin_isa(Isa isa) noexcept;
void unpin_isa() noexcept;

/// Number of consecutive terms between exact re-seeds of the phasor
/// recurrence. Bounds drift of the angle-addition recurrence to
/// roughly `kPhasorReseed` ulps.
inline constexpr std::size_t kPhasorReseed = 32;

/// out[p] = sum_{r < R} w[r] * exp(i 2 pi r x[p]), split real/imag storage.
///
/// `w_re`/`w_im` have R entries, `x`, `out_re`, `out_im` have P entries.
/// Terms are generated by an angle-addition recurrence re-seeded with exact
/// sin/cos every `kPhasorReseed` terms.
void phasor_sum(std::span<const double> w_re, std::span<const double> w_im,
                std::span<const double> x, std::span<double> out_re,
                std::span<double> out_im);

/// acc += a * b elementwise over complex numbers in split storage.
void cmul_accumulate(std::span<const double> a_re, std::span<const double> a_im,
                     std::span<const double> b_re, std::span<const double> b_im,
                     std::span<double> acc_re, std::span<double> acc_im);

namespace scalar {
void phasor_sum(std::span<const double> w_re, std::span<const double> w_im,
                std::span<const double> x, std::span<double> out_re,
                std::span<double> out_im);
void cmul_accumulate(std::span<const double> a_re, std::span<const double> a_im,
                     std::span<const double> b_re, std::span<const double> b_im,
                     std::span<double> acc_re, std::span<double> acc_im);
}  // namespace scalar

namespace avx2 {
// Only defined when built with CURVEREG_HAVE_AVX2; call through the
// dispatcher unless `avx2_available()` has been checked.
void phasor_sum(std::span<const double> w_re, std::span<const double> w_im,
                std::span<const double> x, std::span<double> out_re,
                std::span<double> out_im);
void cmul_accumulate(std::span<const double> a_re, std::span<const double> a_im,
                     std::span<const double> b_re, std::span<const double> b_im,
                     std::span<double> acc_re, std::span<double> acc_im);
}  // namespace avx2

}  // namespace curvereg::simd
