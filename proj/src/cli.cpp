#include "jbjump/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "jbjump/detect.hpp"
#include "jbjump/errors.hpp"
#include "jbjump/io.hpp"
#include "jbjump/montecarlo.hpp"
#include "jbjump/simulate.hpp"
#include "jbjump/textio.hpp"

namespace jbjump::cli {

using nlohmann::json;

namespace {

CLI::Validator open_unit_interval() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double v = 0.0;
        try {
          v = parse_double(s);
        } catch (const Error&) {
          return "value " + s + " is not a number";
        }
        if (!(v > 0.0 && v < 1.0)) {
          return "value " + s + " outside the valid range (0, 1)";
        }
        return {};
      },
      "in (0,1)");
}

CLI::Validator positive_real() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double v = 0.0;
        try {
          v = parse_double(s);
        } catch (const Error&) {
          return "value " + s + " is not a number";
        }
        if (!(v > 0.0) || !std::isfinite(v)) return "value " + s + " must be > 0";
        return {};
      },
      "> 0");
}

void add_model(CLI::App* app, RunConfig& c) {
  app->add_option("--model", c.model, "Model registry name")
      ->check(CLI::IsMember(builtin_model_names()))
      ->capture_default_str();
}

}  // namespace

std::variant<RunConfig, ParseExit> parse_args(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Jump detection and estimation for ergodic jump diffusions", "jbjump"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kToolVersion);

  std::size_t jump_count = 0;
  std::vector<double> alpha_hat;
  std::size_t k_max = 0;
  std::size_t replications = 0;

  // --h is the observation step, so help is long-form only.
  auto subcommand = [&](const char* name, const char* desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "Print this help message and exit");
    return sub;
  };

  auto* sim = subcommand("simulate", "Simulate a jump diffusion path to CSV");
  add_model(sim, c);
  sim->add_option("--alpha", c.alpha, "Diffusion parameter alpha0")->delimiter(',')
      ->capture_default_str();
  sim->add_option("--beta", c.beta, "Drift parameter beta0")->delimiter(',')
      ->capture_default_str();
  sim->add_option("--n", c.n, "Observation intervals")->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--h", c.h, "Observation step")->check(positive_real())
      ->capture_default_str();
  sim->add_option("--refine", c.refine, "Euler sub-steps per interval")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--x0", c.x0, "Initial state")->capture_default_str();
  sim->add_option("--jumps", c.jumps, "Jump law: none | gamma:SHAPE,RATE | big:D1,G1,D2,G2")
      ->capture_default_str();
  sim->add_option("--lambda", c.lambda, "Jump intensity per unit time")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  auto* jc = sim->add_option("--jump-count", jump_count,
                             "Condition on exactly this many jumps in (0, n h]");
  sim->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sim->add_option("--stream", c.stream, "Stream id")->capture_default_str();
  sim->add_option("--out", c.out, "Output CSV (a .json sidecar is written next to it)");

  auto add_input = [&](CLI::App* a) {
    a->add_option("--input", c.input, "Path CSV (t,x[,x_cont,jump_count])")
        ->required();
    add_model(a, c);
  };

  auto* jb = subcommand("jbtest", "Jarque-Bera test on a path");
  add_input(jb);
  auto* jb_alpha_opt = jb->add_option("--alpha", alpha_hat,
                                      "Diffusion estimate used in the residuals "
                                      "(default: one-step estimate on the retained set)")
                           ->delimiter(',');
  jb->add_option("--q", c.q, "Significance level")->check(open_unit_interval())
      ->capture_default_str();
  jb->add_option("--parts", c.parts, "both|skew|kurt")
      ->check(CLI::IsMember({"both", "skew", "kurt"}))->capture_default_str();
  jb->add_option("--retained", c.retained, "'all' or a file of retained 1-based intervals")
      ->capture_default_str();

  auto* est = subcommand("estimate", "Closed-form estimators on a retained set");
  add_input(est);
  est->add_option("--retained", c.retained, "'all' or a file of retained 1-based intervals")
      ->capture_default_str();
  auto* est_init = est->add_option("--alpha-init", alpha_hat,
                                   "Starting point of the scoring step (default: LSE)")
                       ->delimiter(',');
  est->add_option("--out", c.out, "Write JSON here instead of stdout");

  auto* det = subcommand("detect", "Iterative jump detection");
  add_input(det);
  det->add_option("--q", c.q, "Significance level")->check(open_unit_interval())
      ->capture_default_str();
  det->add_option("--batch", c.batch, "Removals per rejection")->check(CLI::PositiveNumber)
      ->capture_default_str();
  det->add_option("--parts", c.parts, "both|skew|kurt")
      ->check(CLI::IsMember({"both", "skew", "kurt"}))->capture_default_str();
  det->add_option("--jb-alpha", c.jb_alpha, "Diffusion estimate fed to the test")
      ->check(CLI::IsMember({"onestep", "lse"}))->capture_default_str();
  auto* kmax = det->add_option("--k-max", k_max, "Removal cap (default n/2)")
                   ->check(CLI::PositiveNumber);
  det->add_option("--out", c.out, "Write JSON here instead of stdout");

  auto* mc = subcommand("mc", "Monte Carlo scenario run");
  mc->add_option("--scenario", c.scenario, "Scenario JSON file")->required()
      ->check(CLI::ExistingFile);
  mc->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  auto* reps = mc->add_option("--replications", replications,
                              "Override the scenario replication count")
                   ->check(CLI::PositiveNumber);
  mc->add_option("--out", c.out, "Output prefix for <prefix>.csv and <prefix>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    const int code = app.exit(e, os, os);
    return ParseExit{code == 0 ? 0 : 2, os.str()};
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  if (jc->count()) c.jump_count = jump_count;
  if (jb_alpha_opt->count() || est_init->count()) c.alpha_hat = alpha_hat;
  if (kmax->count()) c.k_max = k_max;
  if (reps->count()) c.replications = replications;

  if (c.subcommand == "simulate") {
    try {
      parse_jump_law(c.jumps, c.lambda);
    } catch (const Error& e) {
      return ParseExit{2, std::string("--jumps: ") + e.what() + "\n"};
    }
  }
  return c;
}

namespace {

json config_json(const RunConfig& c) {
  json j = {{"subcommand", c.subcommand}, {"model", c.model}};
  if (c.subcommand == "simulate") {
    j.update({{"alpha0", c.alpha}, {"beta0", c.beta}, {"n", c.n}, {"h", c.h},
              {"refine", c.refine}, {"x0", c.x0}, {"jumps", c.jumps},
              {"lambda", c.lambda}, {"seed", c.seed}, {"stream", c.stream}});
    j["jump_count"] = c.jump_count ? json(*c.jump_count) : json(nullptr);
  } else {
    j.update({{"input", c.input}, {"retained", c.retained}});
    if (c.subcommand == "jbtest" || c.subcommand == "detect") {
      j.update({{"q", c.q}, {"parts", c.parts}});
    }
    if (c.subcommand == "detect") {
      j.update({{"batch", c.batch}, {"jb_alpha", c.jb_alpha}});
      j["k_max"] = c.k_max ? json(*c.k_max) : json(nullptr);
    }
    j["alpha"] = c.alpha_hat ? json(*c.alpha_hat) : json(nullptr);
  }
  return j;
}

json envelope(const RunConfig& c) {
  return {{"tool", "jbjump"}, {"version", kToolVersion}, {"config", config_json(c)}};
}

RetainedSet load_retained(const std::string& spec, std::size_t n) {
  if (spec == "all") return RetainedSet::all(n);
  const std::string text = read_text_file(spec);
  std::vector<std::size_t> kept;
  std::string token;
  std::istringstream in(text);
  auto flush = [&] {
    if (token.empty()) return;
    const double v = parse_double(token);
    if (v < 1.0 || v != std::floor(v)) {
      throw InvalidArgument("retained index '" + token + "' is not a positive integer");
    }
    kept.push_back(static_cast<std::size_t>(v) - 1);
    token.clear();
  };
  for (char ch; in.get(ch);) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '[' ||
        ch == ']') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return RetainedSet::only(n, kept);
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_text_file(c.out, text);
  }
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  ModelSpec m = builtin_model(c.model);
  m.jump_law = parse_jump_law(c.jumps, c.lambda);
  SimConfig cfg;
  cfg.n = c.n;
  cfg.h = c.h;
  cfg.refine = c.refine;
  cfg.x0 = c.x0;
  cfg.theta = {c.alpha, c.beta};
  cfg.fixed_jump_count = c.jump_count;
  cfg.seed = c.seed;
  cfg.stream_id = c.stream;
  const SamplePath path = simulate_path(m, cfg);
  const std::string csv = format_path_csv(path);
  json side = path_sidecar(path);
  side["cli"] = config_json(c);
  if (c.out.empty()) {
    out << csv;
  } else {
    write_text_file(c.out, csv);
    write_text_file(c.out + ".json", side.dump(2) + "\n");
  }
  return 0;
}

int run_jbtest(const RunConfig& c, std::ostream& out) {
  const ModelSpec m = builtin_model(c.model);
  const PathData d = read_path_csv(c.input);
  const RetainedSet kept = load_retained(c.retained, d.x.size() - 1);
  std::vector<double> alpha;
  if (c.alpha_hat) {
    alpha = *c.alpha_hat;
  } else {
    alpha = estimate(m, d.x, d.h, kept).alpha_onestep;
  }
  const JbResult r =
      jb_test(jb_statistic(m, d.x, d.h, alpha, kept, parse_jb_parts(c.parts)), c.q);
  json j = envelope(c);
  j["h"] = d.h;
  j["alpha"] = alpha;
  j["result"] = to_json(r);
  out << j.dump(2) << "\n";
  return 0;
}

int run_estimate(const RunConfig& c, std::ostream& out) {
  const ModelSpec m = builtin_model(c.model);
  const PathData d = read_path_csv(c.input);
  const RetainedSet kept = load_retained(c.retained, d.x.size() - 1);
  const std::vector<double> dx = IncrementView::diff(d.x);
  const IncrementView view{std::span<const double>(d.x).first(d.x.size() - 1), dx};
  const EstimateReport rep = estimate(m, view, d.h, kept, c.alpha_hat);
  json j = envelope(c);
  j["h"] = d.h;
  j["n"] = d.x.size() - 1;
  j["report"] = to_json(rep);
  emit(c, j.dump(2) + "\n", out);
  return 0;
}

int run_detect(const RunConfig& c, std::ostream& out) {
  const ModelSpec m = builtin_model(c.model);
  const PathData d = read_path_csv(c.input);
  DetectOptions opts;
  opts.q = c.q;
  opts.batch = c.batch;
  opts.parts = parse_jb_parts(c.parts);
  opts.jb_alpha = c.jb_alpha == "lse" ? JbAlpha::Lse : JbAlpha::OneStep;
  opts.k_max = c.k_max;
  const DetectionState st = detect(m, d.x, d.h, opts);
  json j = envelope(c);
  j["h"] = d.h;
  j["horizon"] = d.t.back() - d.t.front();
  j["detection"] = to_json(st);
  if (d.jump_counts) {
    const auto recall = detection_recall(st, *d.jump_counts);
    j["recall"] = recall ? json(*recall) : json(nullptr);
  }
  emit(c, j.dump(2) + "\n", out);
  return 0;
}

int run_mc(const RunConfig& c, std::ostream& out) {
  Scenario s = read_scenario(c.scenario);
  if (c.replications) s.replications = *c.replications;
  const McSummary summary = run_scenario(s, c.jobs);
  const TableOutput table = emit_table({summary});
  out << table.text;
  if (!c.out.empty()) {
    write_text_file(c.out + ".csv", table.csv);
    json j = {{"tool", "jbjump"},
              {"version", kToolVersion},
              {"scenario", scenario_to_json(s)},
              {"seed", s.seed},
              {"summary", to_json(summary)}};
    write_text_file(c.out + ".json", j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "simulate") return run_simulate(cfg, out);
    if (cfg.subcommand == "jbtest") return run_jbtest(cfg, out);
    if (cfg.subcommand == "estimate") return run_estimate(cfg, out);
    if (cfg.subcommand == "detect") return run_detect(cfg, out);
    if (cfg.subcommand == "mc") return run_mc(cfg, out);
    err << "unknown subcommand '" << cfg.subcommand << "'\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_args(argc, argv);
  if (auto* exit = std::get_if<ParseExit>(&parsed)) {
    (exit->code == 0 ? out : err) << exit->message;
    return exit->code;
  }
  return run(std::get<RunConfig>(parsed), out, err);
}

}  // namespace jbjump::cli
