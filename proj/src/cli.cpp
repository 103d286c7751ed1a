#include "curvereg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "curvereg/experiment.hpp"
#include "curvereg/frechet.hpp"
#include "curvereg/rng.hpp"
#include "curvereg/simd.hpp"

#ifndef CURVEREG_VERSION
#define CURVEREG_VERSION "0.0.0"
#endif

namespace curvereg::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr std::size_t kReconstructionGrid = 1024;
constexpr double kRateBandLo = -1.35;
constexpr double kRateBandHi = -0.65;
constexpr std::size_t kConfidentReps = 10;

struct Artifact {
  std::string name;
  std::string content;
};

struct InputRecord {
  std::string path;
  std::string digest;
};

std::string fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::size_t> parse_sizes(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item(text.data() + pos, comma - pos);
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw std::invalid_argument(std::string(flag) + ": expected comma-separated integers");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::optional<int> parse_m1(const std::string& text) {
  if (text == "auto") return std::nullopt;
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("--m1: expected an integer or 'auto'");
  return v;
}

EstimatorConfig make_config(const Options& o) {
  EstimatorConfig cfg;
  cfg.k0 = o.k0;
  cfg.eta = o.eta;
  cfg.kappa = 2.0 * o.halfwidth;
  cfg.m1 = parse_m1(o.m1);
  return cfg;
}

ShiftLaw make_law(const Options& o) { return ShiftLaw::uniform(o.halfwidth); }

double noise_sigma(const Options& o, const TestFunction& f) {
  if (o.sigma) return NoiseModel::from_sigma(*o.sigma).resolve(f);
  return NoiseModel::from_rsnr(o.rsnr.value_or(0.5)).resolve(f);
}

Json options_json(const Options& o) {
  Json j;
  j["f"] = o.f;
  j["n"] = o.n;
  j["J"] = o.curves ? Json(*o.curves) : Json(nullptr);
  j["rsnr"] = o.rsnr ? Json(*o.rsnr) : Json(nullptr);
  j["sigma"] = o.sigma ? Json(*o.sigma) : Json(nullptr);
  j["halfwidth"] = o.halfwidth;
  j["kappa"] = 2.0 * o.halfwidth;
  j["k0"] = o.k0;
  j["eta"] = o.eta;
  j["m1"] = o.m1;
  j["mode"] = o.mode;
  j["panel"] = o.panel;
  j["truth"] = o.truth;
  j["n_list"] = o.n_list;
  j["J_list"] = o.curve_list;
  j["reps"] = o.reps;
  j["threads"] = o.threads;
  j["inject"] = o.inject;
  return j;
}

Options options_from_manifest(const Json& m) {
  Options o;
  o.command = m.at("command").get<std::string>();
  o.seed = m.at("seed").get<std::uint64_t>();
  o.out = m.at("out_dir").get<std::string>();
  o.isa = m.at("isa").get<std::string>();
  const Json& c = m.at("config");
  o.f = c.at("f").get<std::string>();
  o.n = c.at("n").get<std::size_t>();
  if (!c.at("J").is_null()) o.curves = c.at("J").get<std::size_t>();
  if (!c.at("rsnr").is_null()) o.rsnr = c.at("rsnr").get<double>();
  if (!c.at("sigma").is_null()) o.sigma = c.at("sigma").get<double>();
  o.halfwidth = c.at("halfwidth").get<double>();
  o.k0 = c.at("k0").get<int>();
  o.eta = c.at("eta").get<double>();
  o.m1 = c.at("m1").get<std::string>();
  o.mode = c.at("mode").get<std::string>();
  o.panel = c.at("panel").get<std::string>();
  o.truth = c.at("truth").get<std::string>();
  o.n_list = c.at("n_list").get<std::vector<std::size_t>>();
  o.curve_list = c.at("J_list").get<std::vector<std::size_t>>();
  o.reps = c.at("reps").get<std::size_t>();
  o.threads = c.at("threads").get<unsigned>();
  o.inject = c.at("inject").get<std::string>();
  return o;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Artifact manifest(const Options& o, const std::vector<Artifact>& outputs,
                  const std::vector<InputRecord>& inputs) {
  Json m;
  m["tool"] = "curvereg";
  m["version"] = CURVEREG_VERSION;
  m["command"] = o.command;
  m["seed"] = o.seed;
  m["isa"] = std::string(simd::isa_name(simd::active_isa()));
  m["config"] = options_json(o);
  m["out_dir"] = o.out;
  Json names = Json::array();
  for (const auto& a : outputs) names.push_back(a.name);
  m["outputs"] = names;
  Json ins = Json::array();
  for (const auto& in : inputs) ins.push_back({{"path", in.path}, {"fnv1a", in.digest}});
  m["inputs"] = ins;
  const std::string stem = o.command == "estimate" ? "estimate_" + o.mode : o.command;
  return {stem + "_manifest.json", dump(m)};
}

Json function_json(const TestFunction& f) {
  Json j;
  j["kind"] = std::string(to_string(f.kind()));
  j["parameters"] = f.parameters();
  return j;
}

// ---- simulate ---------------------------------------------------------------

std::vector<Artifact> cmd_simulate(const Options& o, std::vector<InputRecord>&) {
  const std::size_t curves = o.curves.value_or(10);
  if (o.n % 2 != 0) throw std::invalid_argument("--n must be even (got " + std::to_string(o.n) + ")");
  if (curves < 2) throw std::invalid_argument("--J must be >= 2 for registration");
  const TestFunction f = TestFunction::from_name(o.f);
  const double sigma = noise_sigma(o, f);
  const CurvePanel panel =
      simulate_panel(f, o.n, curves, make_law(o), NoiseModel::from_sigma(sigma),
                     derive_seed(o.seed, {static_cast<std::uint64_t>(Stream::Panel), o.n, curves}));

  Json truth;
  truth["function"] = function_json(f);
  truth["n"] = o.n;
  truth["J"] = curves;
  truth["sigma"] = sigma;
  truth["rsnr"] = o.sigma ? Json(nullptr) : Json(o.rsnr.value_or(0.5));
  truth["halfwidth"] = o.halfwidth;
  truth["shifts"] = panel.truth()->shifts;
  return {{"panel.csv", panel_csv(panel)}, {"truth.json", dump(truth)}};
}

// ---- estimate ---------------------------------------------------------------

std::vector<Artifact> cmd_estimate(const Options& o, std::vector<InputRecord>& inputs) {
  if (o.mode != "frechet" && o.mode != "oracle" && o.mode != "naive")
    throw std::invalid_argument("--mode must be frechet, oracle or naive");
  if (o.panel.empty()) throw std::invalid_argument("estimate: --panel is required");
  const std::string panel_text = read_file(o.panel);
  inputs.push_back({o.panel, fnv1a(panel_text)});
  const CurvePanel panel = parse_panel_csv(panel_text);

  std::optional<Json> truth;
  if (!o.truth.empty()) {
    const std::string text = read_file(o.truth);
    inputs.push_back({o.truth, fnv1a(text)});
    try {
      truth = Json::parse(text);
    } catch (const Json::exception&) {
      throw std::runtime_error("truth file " + o.truth + " is not valid JSON");
    }
  }
  if (o.mode == "oracle" && !truth)
    throw std::invalid_argument("--mode oracle needs --truth");

  EstimatorConfig cfg = make_config(o);
  if (o.sigma) {
    cfg.sigma = *o.sigma;
  } else if (truth && truth->contains("sigma")) {
    cfg.sigma = truth->at("sigma").get<double>();
  } else if (o.rsnr) {
    cfg.sigma = calibrate_sigma(TestFunction::from_name(o.f), *o.rsnr);
  } else {
    throw std::invalid_argument("estimate: noise level unknown; pass --sigma, --rsnr or --truth");
  }
  const auto [even, odd] = split_samples(panel);
  cfg.validate(odd.half_size());

  Json est;
  est["mode"] = o.mode;
  est["sigma"] = cfg.sigma;
  std::optional<MeanEstimate> mean;
  if (o.mode == "frechet") {
    MeanResult r = estimate_mean(panel, cfg);
    est["m_hat"] = r.m_hat;
    est["theta_hat"] = std::vector<double>(r.shifts.values().begin(), r.shifts.values().end());
    const auto& d = r.diagnostics;
    est["diagnostics"] = {{"converged", d.converged},
                          {"iterations", d.iterations},
                          {"newton_steps", d.newton_steps},
                          {"criterion", d.criterion},
                          {"projected_grad_norm", d.projected_grad_norm}};
    mean = std::move(r.estimate);
  } else if (o.mode == "oracle") {
    const auto shifts = truth->at("shifts").get<std::vector<double>>();
    OracleResult r = oracle_mean(panel, shifts, cfg);
    est["m_hat"] = r.m_hat;
    est["theta_hat"] = shifts;
    mean = std::move(r.estimate);
  } else {
    const SpectralPanel spec_odd = empirical_coefficients(odd);
    const std::vector<double> zero(panel.curves(), 0.0);
    const int m = select_cutoff(spec_odd, zero, cfg);
    est["m_hat"] = m;
    mean = naive_mean(panel, m);
  }

  Json coeffs = Json::array();
  for (int k = -mean->cutoff(); k <= mean->cutoff(); ++k)
    coeffs.push_back({k, mean->coeff(k).real(), mean->coeff(k).imag()});
  est["coeffs"] = coeffs;

  std::vector<double> grid(kReconstructionGrid);
  for (std::size_t g = 0; g < grid.size(); ++g)
    grid[g] = static_cast<double>(g) / static_cast<double>(grid.size());
  const auto values = reconstruct(*mean, grid);
  std::string csv = "t,value\n";
  for (std::size_t g = 0; g < grid.size(); ++g)
    csv += format_double(grid[g]) + "," + format_double(values[g]) + "\n";

  return {{"estimate_" + o.mode + ".json", dump(est)},
          {"reconstruction_" + o.mode + ".csv", std::move(csv)}};
}

// ---- sweep ------------------------------------------------------------------

std::vector<Artifact> cmd_sweep(const Options& o, std::vector<InputRecord>&) {
  SweepGrid grid;
  grid.n_values = o.n_list.empty() ? std::vector<std::size_t>{128, 256, 512} : o.n_list;
  grid.curve_values = o.curve_list.empty() ? std::vector<std::size_t>{10, 20, 40} : o.curve_list;
  grid.reps = o.reps == 0 ? 20 : o.reps;
  grid.base_seed = o.seed;
  grid.cfg = make_config(o);
  grid.f = TestFunction::from_name(o.f);
  grid.law = make_law(o);
  grid.threads = o.threads;
  if (o.sigma)
    grid.cfg.sigma = *o.sigma;
  else
    grid.rsnr = o.rsnr.value_or(0.5);

  const SweepResult res = relative_error_sweep(grid);
  std::string csv =
      "n,J,frechet_risk,frechet_stderr,oracle_risk,oracle_stderr,naive_risk,naive_stderr,"
      "R,shift_mse,nonconv_rate\n";
  for (const auto& c : res.cells) {
    csv += std::to_string(c.n) + "," + std::to_string(c.curves);
    for (double v : {c.frechet.mean, c.frechet.stderr_, c.oracle.mean, c.oracle.stderr_,
                     c.naive.mean, c.naive.stderr_, c.relative_error, c.shift_mse,
                     c.nonconv_rate})
      csv += "," + format_double(v);
    csv += "\n";
  }
  return {{"sweep.csv", std::move(csv)}};
}

// ---- rates ------------------------------------------------------------------

struct PowerLaw {
  double scale = 1.0;
  double exponent = -1.0;
};

// "y=C/x" or "y=C*x^P"; C is a number or the literal c (taken as 1).
PowerLaw parse_inject(const std::string& spec) {
  const auto fail = [] {
    return std::invalid_argument("--inject: expected 'y=c/x' or 'y=c*x^P'");
  };
  if (spec.rfind("y=", 0) != 0) throw fail();
  const std::string_view body = std::string_view(spec).substr(2);
  const auto constant = [&](std::string_view text) {
    if (text == "c") return 1.0;
    try {
      return parse_double(text);
    } catch (const std::invalid_argument&) {
      throw fail();
    }
  };
  if (body.size() > 2 && body.substr(body.size() - 2) == "/x")
    return {constant(body.substr(0, body.size() - 2)), -1.0};
  const auto star = body.find("*x^");
  if (star == std::string_view::npos) throw fail();
  return {constant(body.substr(0, star)), constant(body.substr(star + 3))};
}

std::vector<Artifact> cmd_rates(const Options& o, std::vector<InputRecord>&) {
  const std::vector<std::size_t> ns =
      o.n_list.empty() ? std::vector<std::size_t>{128, 256, 512, 1024, 2048} : o.n_list;
  if (ns.size() < 2) throw std::invalid_argument("rates: need at least two n values");
  std::vector<double> xs(ns.begin(), ns.end());
  Json summary;

  if (!o.inject.empty()) {
    const PowerLaw law = parse_inject(o.inject);
    std::vector<double> ys(xs.size());
    std::string csv = "n,value\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ys[i] = law.scale * std::pow(xs[i], law.exponent);
      csv += std::to_string(ns[i]) + "," + format_double(ys[i]) + "\n";
    }
    const RateFit fit = rate_slope(xs, ys);
    summary["source"] = "inject";
    summary["quantity"] = o.inject;
    summary["slope"] = fit.slope;
    summary["intercept"] = fit.intercept;
    summary["r2"] = fit.r2;
    summary["band"] = {kRateBandLo, kRateBandHi};
    summary["pass"] = fit.slope >= kRateBandLo && fit.slope <= kRateBandHi;
    summary["low_confidence"] = false;
    return {{"rates.csv", std::move(csv)}, {"rates_summary.json", dump(summary)}};
  }

  const std::size_t curves = o.curves.value_or(8);
  const std::size_t reps = o.reps == 0 ? 50 : o.reps;
  const TestFunction f = TestFunction::from_name(o.f);
  EstimatorConfig cfg = make_config(o);
  cfg.sigma = noise_sigma(o, f);
  const ShiftLaw law = make_law(o);
  const std::uint64_t base = derive_seed(o.seed, {static_cast<std::uint64_t>(Stream::Rates)});

  std::vector<double> mse(ns.size()), risk(ns.size());
  double worst_rel_stderr = 0.0;
  bool conservative = false;
  std::string csv =
      "n,shift_mse,shift_mse_stderr,frechet_risk,frechet_stderr,oracle_risk,oracle_stderr,"
      "van_trees_bound,nonconv_rate\n";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const RiskRecord rec = risk_montecarlo(f, ns[i], curves, law, cfg, reps, base, o.threads);
    std::optional<VanTreesBound> vt;
    if (!f.has_jumps()) vt = van_trees_bound(f, law, ns[i], cfg.sigma);
    conservative = conservative || (vt && vt->conservative);
    mse[i] = rec.shift_mse.mean;
    risk[i] = rec.frechet.mean;
    if (mse[i] > 0.0) worst_rel_stderr = std::max(worst_rel_stderr, rec.shift_mse.stderr_ / mse[i]);
    csv += std::to_string(ns[i]);
    for (double v : {rec.shift_mse.mean, rec.shift_mse.stderr_, rec.frechet.mean,
                     rec.frechet.stderr_, rec.oracle.mean, rec.oracle.stderr_})
      csv += "," + format_double(v);
    csv += "," + (vt ? format_double(vt->value) : std::string("nan"));
    csv += "," + format_double(rec.nonconv_rate) + "\n";
  }
  const RateFit fit = rate_slope(xs, mse);
  const RateFit risk_fit = rate_slope(xs, risk);
  summary["source"] = "simulation";
  summary["quantity"] = "shift_mse";
  summary["J"] = curves;
  summary["reps"] = reps;
  summary["slope"] = fit.slope;
  summary["intercept"] = fit.intercept;
  summary["r2"] = fit.r2;
  summary["band"] = {kRateBandLo, kRateBandHi};
  summary["pass"] = fit.slope >= kRateBandLo && fit.slope <= kRateBandHi;
  summary["low_confidence"] = reps < kConfidentReps || !(worst_rel_stderr <= 0.5);
  summary["max_relative_stderr"] =
      std::isfinite(worst_rel_stderr) ? Json(worst_rel_stderr) : Json("inf");
  summary["risk_slope"] = risk_fit.slope;
  summary["risk_r2"] = risk_fit.r2;
  summary["van_trees_conservative"] = conservative;
  return {{"rates.csv", std::move(csv)}, {"rates_summary.json", dump(summary)}};
}

void add_shared(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Base seed");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--f", o.f, "Test function")->check(CLI::IsMember({"mixtgauss", "heavisine"}));
  sub->add_option("--k0", o.k0, "Registration band");
  sub->add_option("--eta", o.eta, "Cutoff penalty constant");
  auto* rsnr = sub->add_option("--rsnr", o.rsnr, "Root signal-to-noise ratio (default 0.5)");
  sub->add_option("--sigma", o.sigma, "Noise standard deviation")->excludes(rsnr);
  sub->add_option("--halfwidth", o.halfwidth, "Half-width of the uniform shift law");
  sub->add_option("--m1", o.m1, "Maximal cutoff or 'auto'");
  sub->add_option("--isa", o.isa, "Kernel variant")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

void apply_isa(const std::string& isa) {
  if (isa == "scalar") {
    simd::pin_isa(simd::Isa::Scalar);
  } else if (isa == "avx2") {
    if (!simd::avx2_available()) throw std::runtime_error("--isa avx2: not available on this machine");
    simd::pin_isa(simd::Isa::Avx2);
  } else {
    simd::unpin_isa();
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

std::string panel_csv(const CurvePanel& panel) {
  std::string s = "t";
  for (std::size_t j = 0; j < panel.curves(); ++j) s += ",curve_" + std::to_string(j + 1);
  s += "\n";
  for (std::size_t i = 0; i < panel.n(); ++i) {
    s += format_double(panel.design(i));
    for (std::size_t j = 0; j < panel.curves(); ++j) s += "," + format_double(panel.samples()(i, j));
    s += "\n";
  }
  return s;
}

CurvePanel parse_panel_csv(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t c = 0;
    while (true) {
      const std::size_t comma = line.find(',', c);
      cells.push_back(line.substr(c, comma == std::string_view::npos ? line.size() - c : comma - c));
      if (comma == std::string_view::npos) break;
      c = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty() || rows[0].empty() || rows[0][0] != "t")
    throw std::runtime_error("panel csv: missing 't,curve_1,...' header");
  const std::size_t curves = rows[0].size() - 1;
  for (std::size_t j = 0; j < curves; ++j)
    if (rows[0][j + 1] != "curve_" + std::to_string(j + 1))
      throw std::runtime_error("panel csv: unexpected header column '" + std::string(rows[0][j + 1]) + "'");
  if (curves < 1) throw std::runtime_error("panel csv: no curve columns");
  const std::size_t n = rows.size() - 1;
  if (n < 4 || n % 2 != 0)
    throw std::runtime_error("panel csv: number of rows must be even and >= 4 (got " + std::to_string(n) + ")");

  RealMatrix samples(n, curves);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != curves + 1)
      throw std::runtime_error("panel csv: row " + std::to_string(i + 2) + " has the wrong number of fields");
    try {
      const double t = parse_double(row[0]);
      if (std::abs(t - static_cast<double>(i + 1) / static_cast<double>(n)) > 1e-12)
        throw std::runtime_error("panel csv: row " + std::to_string(i + 2) + " is off the design t = l/n");
      for (std::size_t j = 0; j < curves; ++j) samples(i, j) = parse_double(row[j + 1]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("panel csv: row " + std::to_string(i + 2) + ": " + e.what());
    }
  }
  return CurvePanel(std::move(samples));
}

std::vector<fs::path> execute(const Options& opts) {
  apply_isa(opts.isa);
  std::vector<InputRecord> inputs;
  std::vector<Artifact> outputs;
  if (opts.command == "simulate")
    outputs = cmd_simulate(opts, inputs);
  else if (opts.command == "estimate")
    outputs = cmd_estimate(opts, inputs);
  else if (opts.command == "sweep")
    outputs = cmd_sweep(opts, inputs);
  else if (opts.command == "rates")
    outputs = cmd_rates(opts, inputs);
  else
    throw std::invalid_argument("unknown command '" + opts.command + "'");
  outputs.push_back(manifest(opts, outputs, inputs));

  const fs::path dir(opts.out);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  for (const auto& a : outputs) {
    const fs::path p = dir / a.name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << a.content;
    if (!f) throw std::runtime_error("cannot write " + p.string());
    written.push_back(p);
  }
  return written;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvereg: registration and Frechet means of randomly shifted curves"};
  app.require_subcommand(0, 1);
  std::string manifest_path;
  std::optional<std::string> out_override;
  app.add_option("--from-manifest", manifest_path, "Replay a run from its manifest");
  app.add_option("--out", out_override, "Output directory for a replay");

  Options o;
  std::string n_list, curve_list;

  auto* sim = app.add_subcommand("simulate", "Simulate a panel of shifted noisy curves");
  add_shared(sim, o);
  sim->add_option("--n", o.n, "Design points per curve");
  sim->add_option("--J", o.curves, "Number of curves");

  auto* est = app.add_subcommand("estimate", "Estimate the mean pattern from a panel CSV");
  add_shared(est, o);
  est->add_option("--panel", o.panel, "Panel CSV")->required();
  est->add_option("--truth", o.truth, "Truth JSON (needed for --mode oracle)");
  est->add_option("--mode", o.mode, "frechet | oracle | naive")
      ->check(CLI::IsMember({"frechet", "oracle", "naive"}));

  auto* sweep = app.add_subcommand("sweep", "Relative error over an (n, J) grid");
  add_shared(sweep, o);
  sweep->add_option("--n-list", n_list, "Comma-separated n values");
  sweep->add_option("--J-list", curve_list, "Comma-separated J values");
  sweep->add_option("--reps", o.reps, "Replications per cell (default 20)");
  sweep->add_option("--threads", o.threads, "Worker threads");

  auto* rates = app.add_subcommand("rates", "Shift MSE rate over an n ladder");
  add_shared(rates, o);
  rates->add_option("--n-list", n_list, "Comma-separated n values");
  rates->add_option("--J", o.curves, "Number of curves (default 8)");
  rates->add_option("--reps", o.reps, "Replications per n (default 50)");
  rates->add_option("--threads", o.threads, "Worker threads");
  rates->add_option("--inject", o.inject, "Synthetic self-test, e.g. y=c/x");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!manifest_path.empty()) {
      if (!app.get_subcommands().empty())
        throw std::invalid_argument("--from-manifest cannot be combined with a command");
      Json m;
      try {
        m = Json::parse(read_file(manifest_path));
      } catch (const Json::exception&) {
        throw std::runtime_error("manifest " + manifest_path + " is not valid JSON");
      }
      Options replay;
      try {
        replay = options_from_manifest(m);
      } catch (const Json::exception& e) {
        throw std::runtime_error("manifest " + manifest_path + " is incomplete: " + e.what());
      }
      for (const auto& in : m.at("inputs"))
        if (fnv1a(read_file(in.at("path").get<std::string>())) != in.at("fnv1a").get<std::string>())
          throw std::runtime_error("input " + in.at("path").get<std::string>() +
                                   " changed since the manifest was written");
      if (out_override) replay.out = *out_override;
      for (const auto& p : execute(replay)) out << p.string() << "\n";
      return 0;
    }
    if (app.get_subcommands().empty()) {
      err << "error: a command is required (simulate, estimate, sweep, rates) or --from-manifest\n";
      return 2;
    }
    if (out_override) throw std::invalid_argument("--out must follow the command");
    o.command = app.get_subcommands().front()->get_name();
    if (!n_list.empty()) o.n_list = parse_sizes(n_list, "--n-list");
    if (!curve_list.empty()) o.curve_list = parse_sizes(curve_list, "--J-list");
    for (const auto& p : execute(o)) out << p.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    err << "error: " << msg << "\n";
    return 1;
  }
}

}  // namespace curvereg::cli
