// Command-line front end: simulate walks and limit processes to CSV/SVG,
// run verification suites, and execute Monte Carlo plan files.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anglewalk/analysis.hpp"
#include "anglewalk/io.hpp"
#include "anglewalk/limits.hpp"
#include "anglewalk/montecarlo.hpp"
#include "anglewalk/sampling.hpp"
#include "anglewalk/verify.hpp"
#include "anglewalk/walks.hpp"

namespace {

using namespace anglewalk;

// Usage problems (bad flags, unreadable files) exit with 2; verification
// failures exit with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedChoice {
  sampling::Seed seed;
  std::string text;
};

// --seed flag, then ANGLEWALK_SEED, then "1".
SeedChoice resolve_seed(const std::string& flag_value) {
  std::string text = flag_value;
  if (text.empty()) {
    const char* env = std::getenv("ANGLEWALK_SEED");
    text = (env != nullptr && *env != '\0') ? env : "1";
  }
  auto parsed = sampling::parse_seed(text);
  if (!parsed) {
    throw UsageError("seed must be a decimal or 0x-prefixed hex 64-bit integer, got '" +
                     text + "'");
  }
  return {*parsed, text};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw UsageError("failed while writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Flags shared by every command that renders an SVG.
struct RenderFlags {
  std::string svg_path;
  std::size_t width = 800;
  std::size_t height = 800;
  double stroke_width = 1.0;
  double margin = 0.05;
  std::vector<double> window;  // two values when given

  void attach(CLI::App* cmd) {
    cmd->add_option("--svg", svg_path, "write an SVG rendering to this path");
    cmd->add_option("--width", width, "SVG width in pixels")->capture_default_str();
    cmd->add_option("--height", height, "SVG height in pixels")->capture_default_str();
    cmd->add_option("--stroke-width", stroke_width, "stroke width in pixels")
        ->capture_default_str();
    cmd->add_option("--margin", margin, "margin as a fraction of the data span")
        ->capture_default_str();
    cmd->add_option("--window", window,
                    "restrict rendering to path times t_min t_max (two values in [0, 1])")
        ->expected(2);
  }

  io::RenderOptions options() const {
    io::RenderOptions opts;
    opts.width = width;
    opts.height = height;
    opts.stroke_width = stroke_width;
    opts.margin = margin;
    if (!window.empty()) opts.zoom_window = std::make_pair(window[0], window[1]);
    return opts;
  }

  void append_reproduce(std::ostringstream& cmd) const {
    if (svg_path.empty()) return;
    cmd << " --svg " << svg_path << " --width " << width << " --height " << height
        << " --stroke-width " << io::format_double(stroke_width) << " --margin "
        << io::format_double(margin);
    if (!window.empty()) {
      cmd << " --window " << io::format_double(window[0]) << ' '
          << io::format_double(window[1]);
    }
  }
};

struct SimulateArgs {
  std::string construction;
  double alpha = 0.0;
  double alpha_deg = 0.0;
  bool has_alpha = false;
  bool has_alpha_deg = false;
  double coeff = 0.0;
  double exponent = 0.0;
  std::uint64_t n = 1000;
  std::string seed_flag;
  std::uint64_t stream = 0;
  std::string rescale = "none";
  std::string out_path;
  RenderFlags render;
};

int cmd_simulate(const SimulateArgs& args) {
  auto cons = io::construction_from_name(args.construction);
  if (!cons) {
    throw UsageError("unknown construction '" + args.construction +
                     "' (expected iid, iid-shrinking, or markov)");
  }
  walks::WalkSpec spec;
  spec.construction = *cons;
  spec.n = args.n;
  if (*cons == walks::Construction::IidConstant) {
    if (args.has_alpha == args.has_alpha_deg) {
      throw UsageError("construction iid needs exactly one of --alpha / --alpha-deg");
    }
    spec.alpha = args.has_alpha ? args.alpha : args.alpha_deg * std::numbers::pi / 180.0;
  } else {
    spec.coeff = args.coeff;
    spec.exponent = args.exponent;
  }
  spec.validate();  // invalid_argument maps to exit 2 in main

  std::optional<walks::RescaleMode> mode;
  if (args.rescale != "none") {
    mode = io::rescale_from_name(args.rescale);
    if (!mode) {
      throw UsageError("unknown rescale '" + args.rescale +
                       "' (expected none, by-n, by-sqrt-n, or by-alpha-sqrt-n)");
    }
  }

  const SeedChoice seed = resolve_seed(args.seed_flag);
  auto src = sampling::derive_stream(seed.seed, args.stream);
  auto wr = walks::generate_walk(spec, src);
  walks::Polyline path = mode ? walks::rescale(wr.path, *mode, spec.alpha_n()) : wr.path;

  std::ostringstream desc;
  desc << "construction=" << io::construction_name(spec.construction);
  if (spec.construction == walks::Construction::IidConstant) {
    desc << " alpha=" << io::format_double(spec.alpha);
  } else {
    desc << " coeff=" << io::format_double(spec.coeff)
         << " exponent=" << io::format_double(spec.exponent)
         << " alpha_n=" << io::format_double(spec.alpha_n());
  }
  desc << " n=" << spec.n << " rescale=" << args.rescale;

  std::cout << "seed=" << seed.text << " stream=" << args.stream << ' ' << desc.str()
            << '\n';

  if (!args.out_path.empty()) {
    write_file(args.out_path, io::walk_csv(path, spec, seed.text));
    std::cout << "wrote " << args.out_path << " (" << spec.n + 1 << " rows)\n";
  }
  if (!args.render.svg_path.empty()) {
    write_file(args.render.svg_path,
               io::svg_render(path, args.render.options(), seed.text, desc.str()));
    std::cout << "wrote " << args.render.svg_path << '\n';
  }

  std::ostringstream cmd;
  cmd << "anglewalk simulate --construction " << io::construction_name(spec.construction);
  if (spec.construction == walks::Construction::IidConstant) {
    cmd << " --alpha " << io::format_double(spec.alpha);
  } else {
    cmd << " --coeff " << io::format_double(spec.coeff) << " --exponent "
        << io::format_double(spec.exponent);
  }
  cmd << " --n " << spec.n << " --seed " << seed.text << " --stream " << args.stream
      << " --rescale " << args.rescale;
  if (!args.out_path.empty()) cmd << " --out " << args.out_path;
  args.render.append_reproduce(cmd);
  std::cout << "reproduce: " << cmd.str() << '\n';
  return 0;
}

struct LimitArgs {
  std::string kind;
  double sigma = 1.0;
  double kappa = 0.0;
  bool has_kappa = false;
  std::string drift = "derived";
  std::size_t grid = 1000;
  std::string seed_flag;
  std::uint64_t stream = 0;
  std::string out_path;
  RenderFlags render;
};

int cmd_limit(const LimitArgs& args) {
  auto kind = io::limit_kind_from_name(args.kind);
  if (!kind) throw UsageError("unknown kind '" + args.kind + "' (expected bm, c1, or c2)");

  limits::LimitSpec spec;
  spec.kind = *kind;
  spec.grid = args.grid;
  if (*kind == limits::Kind::ScaledBM) {
    spec.sigma = args.sigma;
  } else {
    if (!args.has_kappa) throw UsageError("kinds c1/c2 require --kappa");
    spec.kappa = args.kappa;
    if (args.drift == "derived") {
      spec.drift_coeff = limits::derived_drift(spec.kappa);
    } else if (args.drift == "paper") {
      spec.drift_coeff = limits::paper_drift(spec.kappa);
    } else {
      char* end = nullptr;
      spec.drift_coeff = std::strtod(args.drift.c_str(), &end);
      if (end == args.drift.c_str() || *end != '\0') {
        throw UsageError("--drift-coeff must be 'derived', 'paper', or a number, got '" +
                         args.drift + "'");
      }
    }
  }
  spec.validate();

  const SeedChoice seed = resolve_seed(args.seed_flag);
  auto src = sampling::derive_stream(seed.seed, args.stream);
  auto real = limits::simulate(spec, src);

  std::ostringstream desc;
  desc << "kind=" << io::limit_kind_name(spec.kind);
  if (spec.kind == limits::Kind::ScaledBM) {
    desc << " sigma=" << io::format_double(spec.sigma);
  } else {
    desc << " kappa=" << io::format_double(spec.kappa)
         << " drift_coeff=" << io::format_double(spec.drift_coeff);
  }
  desc << " grid=" << spec.grid;

  std::cout << "seed=" << seed.text << " stream=" << args.stream << ' ' << desc.str()
            << '\n';

  if (!args.out_path.empty()) {
    write_file(args.out_path, io::limit_csv(real, spec, seed.text));
    std::cout << "wrote " << args.out_path << " (" << spec.grid + 1 << " rows)\n";
  }
  if (!args.render.svg_path.empty()) {
    write_file(args.render.svg_path,
               io::svg_render(real.path, args.render.options(), seed.text, desc.str()));
    std::cout << "wrote " << args.render.svg_path << '\n';
  }

  std::ostringstream cmd;
  cmd << "anglewalk limit --kind " << io::limit_kind_name(spec.kind);
  if (spec.kind == limits::Kind::ScaledBM) {
    cmd << " --sigma " << io::format_double(spec.sigma);
  } else {
    cmd << " --kappa " << io::format_double(spec.kappa) << " --drift-coeff "
        << io::format_double(spec.drift_coeff);
  }
  cmd << " --grid " << spec.grid << " --seed " << seed.text << " --stream " << args.stream;
  if (!args.out_path.empty()) cmd << " --out " << args.out_path;
  args.render.append_reproduce(cmd);
  std::cout << "reproduce: " << cmd.str() << '\n';
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::string seed_flag;
  unsigned workers = 1;
  std::string json_path;
  // single-check overrides; presence tracked by the CLI option counts
  double alpha = std::numbers::pi / 2.0;
  double alpha_deg = 0.0;
  bool has_alpha_deg = false;
  std::uint64_t n = 0;
  std::size_t replicates = 0;
  int r = 2;
  std::size_t lag = 1;
  std::string construction;
  double coeff = 0.0;
  double exponent = 0.0;
  std::size_t grid = 1000;
  double tolerance = 0.0;
  bool has_tolerance = false;
  bool has_override = false;
};

void print_checks(const std::vector<verify::CheckResult>& checks) {
  for (const auto& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
              << "  observed=" << io::format_double(c.observed)
              << " expected=" << io::format_double(c.expected)
              << " tolerance=" << io::format_double(c.tolerance);
    if (!c.note.empty()) std::cout << "  (" << c.note << ')';
    std::cout << '\n';
  }
}

std::vector<verify::CheckResult> run_single_check(const VerifyArgs& args,
                                                  const verify::Options& opts) {
  const double alpha =
      args.has_alpha_deg ? args.alpha_deg * std::numbers::pi / 180.0 : args.alpha;
  if (args.suite == "autocov") {
    const std::uint64_t n = args.n != 0 ? args.n : 1000000;
    return {verify::check_autocov_at(alpha, n, args.lag, opts)};
  }
  if (args.suite == "msd") {
    const std::uint64_t n = args.n != 0 ? args.n : 1000;
    const std::size_t reps = args.replicates != 0 ? args.replicates : 5000;
    std::optional<double> tol;
    if (args.has_tolerance) tol = args.tolerance;
    return {verify::check_msd_at(alpha, n, reps, opts, tol)};
  }
  if (args.suite == "tv") {
    return verify::check_tv_at(alpha, args.r, opts);
  }
  if (args.suite == "lipschitz") {
    walks::WalkSpec spec;
    auto cons = io::construction_from_name(
        args.construction.empty() ? "iid" : args.construction);
    if (!cons) throw UsageError("unknown construction '" + args.construction + "'");
    spec.construction = *cons;
    spec.n = args.n != 0 ? args.n : 1000;
    if (*cons == walks::Construction::IidConstant) {
      spec.alpha = alpha;
    } else {
      spec.coeff = args.coeff;
      spec.exponent = args.exponent;
    }
    spec.validate();
    return {verify::check_lipschitz_at(spec, args.grid, opts)};
  }
  throw UsageError("suite '" + args.suite + "' does not accept parameter overrides");
}

int cmd_verify(const VerifyArgs& args) {
  const SeedChoice seed = resolve_seed(args.seed_flag);
  verify::Options opts;
  opts.seed = seed.seed;
  opts.seed_text = seed.text;
  opts.workers = args.workers == 0 ? 1 : args.workers;

  nlohmann::json report;
  bool ok = true;

  if (args.suite == "all") {
    if (args.has_override) {
      throw UsageError("'verify all' does not accept parameter overrides");
    }
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& [name, fn] : verify::suites()) {
      std::cout << "== suite " << name << " (seed " << seed.text << ")\n";
      auto checks = fn(opts);
      print_checks(checks);
      const bool suite_ok = verify::all_pass(checks);
      std::cout << "suite " << name << ": " << (suite_ok ? "PASS" : "FAIL") << '\n';
      ok = ok && suite_ok;
      reports.push_back(verify::report_json(name, opts, checks));
    }
    report = nlohmann::json{{"reports", std::move(reports)}, {"seed", seed.text},
                            {"pass", ok}};
  } else {
    std::vector<verify::CheckResult> checks;
    if (args.has_override) {
      checks = run_single_check(args, opts);
    } else {
      const auto& registry = verify::suites();
      auto it = std::find_if(registry.begin(), registry.end(),
                             [&](const auto& entry) { return entry.first == args.suite; });
      if (it == registry.end()) {
        throw UsageError("unknown suite '" + args.suite +
                         "' (expected autocov, msd, tv, regimes, brown-constant, "
                         "c1-curvature, c2-curvature, lipschitz, limits, or all)");
      }
      checks = it->second(opts);
    }
    std::cout << "== suite " << args.suite << " (seed " << seed.text << ")\n";
    print_checks(checks);
    ok = verify::all_pass(checks);
    std::cout << "suite " << args.suite << ": " << (ok ? "PASS" : "FAIL") << '\n';
    report = verify::report_json(args.suite, opts, checks);
  }

  if (!args.json_path.empty()) {
    write_file(args.json_path, report.dump(2) + "\n");
    std::cout << "wrote " << args.json_path << '\n';
  }
  return ok ? 0 : 1;
}

struct RunArgs {
  std::string plan_path;
  std::string out_path;
  std::string seed_flag;
  unsigned workers = 1;
};

int cmd_run(const RunArgs& args) {
  nlohmann::json plan_json;
  try {
    plan_json = nlohmann::json::parse(read_file(args.plan_path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("cannot parse plan '" + args.plan_path + "': " + e.what());
  }
  montecarlo::ExperimentPlan plan;
  try {
    plan = io::plan_from_json(plan_json);
  } catch (const std::exception& e) {
    throw UsageError("invalid plan '" + args.plan_path + "': " + e.what());
  }
  // --seed overrides the plan's seed (same resolution chain as elsewhere).
  if (!args.seed_flag.empty()) {
    const SeedChoice seed = resolve_seed(args.seed_flag);
    plan.master_seed = seed.seed;
    plan.seed_text = seed.text;
  }
  auto values = montecarlo::run(plan, args.workers == 0 ? 1 : args.workers);
  const std::string lines = io::results_jsonl(plan, values);
  if (args.out_path.empty()) {
    std::cout << lines;
  } else {
    write_file(args.out_path, lines);
    std::cout << "seed=" << plan.seed_text << " replicates=" << plan.replicates
              << " estimators=" << plan.estimators.size() << '\n'
              << "wrote " << args.out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"angle-constrained planar random walks: simulation, limit processes, "
               "verification suites, and Monte Carlo plans"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate one walk, write CSV/SVG");
  simulate->add_option("--construction", sim.construction,
                       "iid | iid-shrinking | markov")->required();
  auto* alpha_opt = simulate->add_option("--alpha", sim.alpha,
                                         "half-width of the angle law in radians (iid)");
  auto* alpha_deg_opt =
      simulate->add_option("--alpha-deg", sim.alpha_deg, "same, in degrees");
  simulate->add_option("--coeff", sim.coeff,
                       "alpha_n = coeff * n^-exponent (iid-shrinking / markov)");
  simulate->add_option("--exponent", sim.exponent, "see --coeff");
  simulate->add_option("--n", sim.n, "number of unit steps")->capture_default_str();
  simulate->add_option("--seed", sim.seed_flag,
                       "master seed (decimal or 0x-hex; default ANGLEWALK_SEED or 1)");
  simulate->add_option("--stream", sim.stream, "stream index under the master seed")
      ->capture_default_str();
  simulate->add_option("--rescale", sim.rescale,
                       "none | by-n | by-sqrt-n | by-alpha-sqrt-n")
      ->capture_default_str();
  simulate->add_option("--out", sim.out_path, "write vertex CSV to this path");
  sim.render.attach(simulate);

  LimitArgs lim;
  auto* limit = app.add_subcommand("limit", "simulate one limit process, write CSV/SVG");
  limit->add_option("--kind", lim.kind, "bm | c1 | c2")->required();
  limit->add_option("--sigma", lim.sigma, "diffusion scale (bm)")->capture_default_str();
  auto* kappa_opt = limit->add_option("--kappa", lim.kappa, "limit parameter (c1/c2)");
  limit->add_option("--drift-coeff", lim.drift,
                    "derived | paper | <number>; derived = sqrt(kappa/3), paper = the "
                    "alternative printed coefficient (2/3) kappa")
      ->capture_default_str();
  limit->add_option("--grid", lim.grid, "time steps on [0, 1]")->capture_default_str();
  limit->add_option("--seed", lim.seed_flag, "master seed (default ANGLEWALK_SEED or 1)");
  limit->add_option("--stream", lim.stream, "stream index under the master seed")
      ->capture_default_str();
  limit->add_option("--out", lim.out_path, "write realization CSV to this path");
  lim.render.attach(limit);

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand(
      "verify", "run a verification suite (autocov, msd, tv, regimes, brown-constant, "
                "c1-curvature, c2-curvature, lipschitz, limits, all)");
  verify_cmd->add_option("suite", ver.suite, "suite name or 'all'")->required();
  verify_cmd->add_option("--seed", ver.seed_flag,
                         "master seed (default ANGLEWALK_SEED or 1)");
  verify_cmd->add_option("--workers", ver.workers, "worker threads for Monte Carlo")
      ->capture_default_str();
  verify_cmd->add_option("--json", ver.json_path, "write the JSON report to this path");
  auto* v_alpha = verify_cmd->add_option("--alpha", ver.alpha,
                                         "single-check override: angle half-width");
  auto* v_alpha_deg =
      verify_cmd->add_option("--alpha-deg", ver.alpha_deg, "same, in degrees");
  auto* v_n = verify_cmd->add_option("--n", ver.n, "single-check override: walk length");
  auto* v_reps = verify_cmd->add_option("--replicates", ver.replicates,
                                        "single-check override: Monte Carlo replicates");
  auto* v_r = verify_cmd->add_option("--r", ver.r, "single-check override: tv fold count");
  auto* v_lag =
      verify_cmd->add_option("--lag", ver.lag, "single-check override: autocov lag");
  auto* v_cons = verify_cmd->add_option("--construction", ver.construction,
                                        "single-check override: lipschitz construction");
  auto* v_coeff =
      verify_cmd->add_option("--coeff", ver.coeff, "single-check override: see simulate");
  auto* v_expo = verify_cmd->add_option("--exponent", ver.exponent,
                                        "single-check override: see simulate");
  auto* v_grid = verify_cmd->add_option("--grid", ver.grid,
                                        "single-check override: lipschitz grid");
  auto* v_tol = verify_cmd->add_option("--tolerance", ver.tolerance,
                                       "single-check override: absolute tolerance");

  RunArgs runp;
  auto* run_cmd = app.add_subcommand("run", "execute a Monte Carlo plan file");
  run_cmd->add_option("--plan", runp.plan_path, "plan JSON path")->required();
  run_cmd->add_option("--out", runp.out_path, "results JSONL path (default stdout)");
  run_cmd->add_option("--seed", runp.seed_flag, "override the plan's master seed");
  run_cmd->add_option("--workers", runp.workers, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) {
      sim.has_alpha = alpha_opt->count() > 0;
      sim.has_alpha_deg = alpha_deg_opt->count() > 0;
      return cmd_simulate(sim);
    }
    if (limit->parsed()) {
      lim.has_kappa = kappa_opt->count() > 0;
      return cmd_limit(lim);
    }
    if (verify_cmd->parsed()) {
      ver.has_alpha_deg = v_alpha_deg->count() > 0;
      ver.has_tolerance = v_tol->count() > 0;
      ver.has_override = v_alpha->count() + v_alpha_deg->count() + v_n->count() +
                             v_reps->count() + v_r->count() + v_lag->count() +
                             v_cons->count() + v_coeff->count() + v_expo->count() +
                             v_grid->count() + v_tol->count() >
                         0;
      return cmd_verify(ver);
    }
    if (run_cmd->parsed()) {
      return cmd_run(runp);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
