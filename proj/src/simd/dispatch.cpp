#include <atomic>

#include "curvereg/simd.hpp"

namespace curvereg::simd {
namespace {

Isa detect() noexcept {
#if defined(CURVEREG_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::Avx2;
#endif
  return Isa::Scalar;
}

const Isa kDetected = detect();

// -1: no pin; otherwise the pinned Isa value.
std::atomic<int> g_pinned{-1};

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

bool avx2_available() noexcept { return kDetected == Isa::Avx2; }

Isa active_isa() noexcept {
  const int pinned = g_pinned.load(std::memory_order_relaxed);
  if (pinned < 0) return kDetected;
  const auto isa = static_cast<Isa>(pinned);
  if (isa == Isa::Avx2 && !avx2_available()) return Isa::Scalar;
  return isa;
}

void pin_isa(Isa isa) noexcept {
  g_pinned.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void unpin_isa() noexcept { g_pinned.store(-1, std::memory_order_relaxed); }

void phasor_sum(std::span<const double> w_re, std::span<const double> w_im,
                std::span<const double> x, std::span<double> out_re,
                std::span<double> out_im) {
#ifdef CURVEREG_HAVE_AVX2
  if (active_isa() == Isa::Avx2)
    return avx2::phasor_sum(w_re, w_im, x, out_re, out_im);
#endif
  scalar::phasor_sum(w_re, w_im, x, out_re, out_im);
}

void cmul_accumulate(std::span<const double> a_re, std::span<const double> a_im,
                     std::span<const double> b_re, std::span<const double> b_im,
                     std::span<double> acc_re, std::span<double> acc_im) {
#ifdef CURVEREG_HAVE_AVX2
  if (active_isa() == Isa::Avx2)
    return avx2::cmul_accumulate(a_re, a_im, b_re, b_im, acc_re, acc_im);
#endif
  scalar::cmul_accumulate(a_re, a_im, b_re, b_im, acc_re, acc_im);
}

}  // namespace curvereg::simd
