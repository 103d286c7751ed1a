#pragma once

// Command-line front end. Commands: simulate, estimate, sweep, rates. Every
// command writes a manifest next to its outputs; `--from-manifest` replays it.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvereg/signal.hpp"

namespace curvereg::cli {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
/// Strict full-string parse; throws std::invalid_argument.
double parse_double(std::string_view text);

/// Header `t,curve_1,...,curve_J`, one row per design point.
std::string panel_csv(const CurvePanel& panel);
/// Inverse of panel_csv; checks the design column. Throws std::runtime_error
/// with a one-line reason for malformed input.
CurvePanel parse_panel_csv(std::string_view text);

struct Options {
  std::string command;
  std::string f = "mixtgauss";
  std::size_t n = 512;
  std::optional<std::size_t> curves;  // 10 for simulate, 8 for rates
  std::optional<double> rsnr;  // default 0.5 unless sigma is given
  std::optional<double> sigma;
  double halfwidth = 0.0625;
  int k0 = 5;
  double eta = 2.5;
  std::string m1 = "auto";
  std::uint64_t seed = 0;
  std::string out = "out";
  // estimate
  std::string mode = "frechet";
  std::string panel;
  std::string truth;
  // sweep / rates
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> curve_list;
  std::size_t reps = 0;  // command default when 0
  unsigned threads = 1;
  std::string inject;
  // "auto", "scalar" or "avx2"
  std::string isa = "auto";
};

/// Runs one command. Returns the process exit code; diagnostics go to `err`
/// as a single line, progress (output paths) to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes already-parsed options (used by run and by manifest replay).
/// Returns the written paths. Throws on any hard error.
std::vector<std::filesystem::path> execute(const Options& opts);

}  // namespace curvereg::cli
