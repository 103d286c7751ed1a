#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace curvereg {

/// Stream tags mixed into derived seeds so that independent consumers of one
/// base seed never share a generator state.
enum class Stream : std::uint64_t {
  Panel = 0x50414e454cULL,  // "PANEL"
  Sweep = 0x5357454550ULL,  // "SWEEP"
  Rates = 0x5241544553ULL,  // "RATES"
  Test = 0x54455354ULL,     // "TEST"
};

/// One step of the splitmix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Deterministic seed derivation: folds each part into a splitmix64 chain
/// started at `base`. Documented and stable across releases, because sweep
/// outputs are keyed on it:
///
///   h = base; for p in parts: h ^= p; h = splitmix64(h)
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) noexcept;

/// Seeded generator with platform-independent uniform and Gaussian draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so the transforms below are
/// implemented here: 53-bit uniforms and Box-Muller normals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Standard normal.
  double normal() noexcept;
  std::uint64_t next_u64() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace curvereg
