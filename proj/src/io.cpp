#include "jbjump/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jbjump/errors.hpp"
#include "jbjump/textio.hpp"

namespace jbjump {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open '" + file.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot open '" + file.string() + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + file.string() + "' failed");
}

PathData parse_path_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw MalformedRow(1, "empty file");
  const auto header = split_csv_line(line);
  const bool annotated =
      header == std::vector<std::string>{"t", "x", "x_cont", "jump_count"};
  if (!annotated && header != std::vector<std::string>{"t", "x"}) {
    throw MalformedRow(1, "header must be 't,x' or 't,x,x_cont,jump_count'");
  }

  PathData d;
  std::vector<double> xc;
  std::vector<std::size_t> counts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw MalformedRow(lineno, "expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(f.size()));
    }
    try {
      d.t.push_back(parse_double(f[0]));
      d.x.push_back(parse_double(f[1]));
      if (annotated) {
        xc.push_back(parse_double(f[2]));
        const bool first = d.t.size() == 1;
        if (first) {
          if (!f[3].empty()) throw InvalidArgument("jump_count must be empty on the first row");
        } else {
          const double c = parse_double(f[3]);
          if (c < 0.0 || c != std::floor(c)) {
            throw InvalidArgument("jump_count must be a nonnegative integer");
          }
          counts.push_back(static_cast<std::size_t>(c));
        }
      }
    } catch (const InvalidArgument& e) {
      throw MalformedRow(lineno, e.what());
    }
    if (!std::isfinite(d.t.back()) || !std::isfinite(d.x.back())) {
      throw MalformedRow(lineno, "non-finite value");
    }
  }
  if (d.t.size() < 2) throw MalformedRow(lineno, "need at least two observations");

  const std::size_t n = d.t.size() - 1;
  d.h = (d.t.back() - d.t.front()) / static_cast<double>(n);
  if (!(d.h > 0.0)) throw NonUniformGrid("time stamps are not increasing");
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = d.t[i + 1] - d.t[i];
    if (!(dt > 0.0) || std::fabs(dt - d.h) > 1e-9 * d.h) {
      throw NonUniformGrid("grid spacing " + format_double(dt) + " at row " +
                           std::to_string(i + 3) + " differs from h = " +
                           format_double(d.h));
    }
  }
  if (annotated) {
    d.x_cont = std::move(xc);
    d.jump_counts = std::move(counts);
  }
  return d;
}

PathData read_path_csv(const std::filesystem::path& file) {
  return parse_path_csv(read_text_file(file));
}

std::string format_path_csv(const SamplePath& path) {
  std::string out = "t,x,x_cont,jump_count\n";
  for (std::size_t j = 0; j < path.x.size(); ++j) {
    out += format_double(static_cast<double>(j) * path.h());
    out += ',';
    out += format_double(path.x[j]);
    out += ',';
    out += format_double(path.x_cont[j]);
    out += ',';
    if (j > 0) out += std::to_string(path.jump_counts[j - 1]);
    out += '\n';
  }
  return out;
}

json jump_law_to_json(const JumpLaw& law) {
  json j;
  if (const auto* g = std::get_if<GammaLaw>(&law.kind)) {
    j = {{"kind", "gamma"}, {"shape", g->shape}, {"rate", g->rate}};
  } else if (const auto* b = std::get_if<BilateralIGLaw>(&law.kind)) {
    j = {{"kind", "bilateral_ig"},
         {"delta1", b->delta1},
         {"gamma1", b->gamma1},
         {"delta2", b->delta2},
         {"gamma2", b->gamma2}};
  } else {
    j = {{"kind", "none"}};
  }
  j["intensity"] = law.intensity;
  return j;
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
  }
}

double positive(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + " lacks '" + key + "'");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(key) + " in " + where + " must be positive");
  }
  return v;
}

std::vector<double> vector_field(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

}  // namespace

JumpLaw jump_law_from_json(const json& j) {
  const std::string where = "jump_law";
  if (!j.is_object() || !j.contains("kind")) {
    throw InvalidArgument("jump_law must be an object with a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  JumpLaw law;
  if (kind == "gamma") {
    reject_unknown_keys(j, {"kind", "shape", "rate", "intensity"}, where);
    law.kind = GammaLaw{positive(j, "shape", where), positive(j, "rate", where)};
  } else if (kind == "bilateral_ig") {
    reject_unknown_keys(j, {"kind", "delta1", "gamma1", "delta2", "gamma2", "intensity"},
                        where);
    law.kind = BilateralIGLaw{positive(j, "delta1", where), positive(j, "gamma1", where),
                              positive(j, "delta2", where), positive(j, "gamma2", where)};
  } else if (kind == "none") {
    reject_unknown_keys(j, {"kind", "intensity"}, where);
  } else {
    throw InvalidArgument("jump_law kind must be none|gamma|bilateral_ig, got '" + kind + "'");
  }
  law.intensity = j.value("intensity", 0.0);
  if (!(law.intensity >= 0.0) || !std::isfinite(law.intensity)) {
    throw InvalidArgument("jump intensity must be finite and >= 0");
  }
  return law;
}

JumpLaw parse_jump_law(const std::string& spec, double intensity) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw InvalidArgument("jump intensity must be finite and >= 0");
  }
  JumpLaw law;
  law.intensity = intensity;
  if (spec == "none") return law;
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InvalidArgument("jump law must be 'none', 'gamma:SHAPE,RATE' or 'big:D1,G1,D2,G2'");
  }
  const std::string kind = spec.substr(0, colon);
  std::vector<double> p;
  for (const auto& f : split_csv_line(spec.substr(colon + 1))) {
    const double v = parse_double(f);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("jump law parameters must be positive");
    }
    p.push_back(v);
  }
  if (kind == "gamma" && p.size() == 2) {
    law.kind = GammaLaw{p[0], p[1]};
  } else if (kind == "big" && p.size() == 4) {
    law.kind = BilateralIGLaw{p[0], p[1], p[2], p[3]};
  } else {
    throw InvalidArgument("jump law must be 'none', 'gamma:SHAPE,RATE' or 'big:D1,G1,D2,G2'");
  }
  return law;
}

json path_sidecar(const SamplePath& path) {
  json marks = json::array();
  for (const auto& m : path.jump_marks) {
    marks.push_back({{"time", m.time},
                     {"size", m.size},
                     {"pre_state", m.pre_state},
                     {"increment", m.increment},
                     {"interval", m.interval}});
  }
  const SimConfig& c = path.config;
  json cfg = {{"model", path.model_name},
              {"n", c.n},
              {"h", c.h},
              {"refine", c.refine},
              {"x0", c.x0},
              {"alpha0", c.theta.alpha0},
              {"beta0", c.theta.beta0},
              {"jump_law", jump_law_to_json(path.jump_law)},
              {"seed", c.seed},
              {"stream_id", c.stream_id}};
  cfg["fixed_jump_count"] =
      c.fixed_jump_count ? json(*c.fixed_jump_count) : json(nullptr);
  return {{"tool", "jbjump"},
          {"version", kToolVersion},
          {"config", cfg},
          {"horizon", c.horizon()},
          {"jump_marks", marks}};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const EstimateReport& r) {
  return {{"alpha_lse", r.alpha_lse},
          {"alpha_onestep", r.alpha_onestep},
          {"beta", r.beta},
          {"sigma_alpha", matrix_to_json(r.sigma_alpha)},
          {"sigma_beta", matrix_to_json(r.sigma_beta)},
          {"retained_count", r.retained_count},
          {"rcond", {{"lse", r.rcond_lse}, {"onestep", r.rcond_onestep}, {"beta", r.rcond_beta}}}};
}

json to_json(const JbResult& r) {
  return {{"jb", r.jb},
          {"skew_part", r.skew_part},
          {"kurt_part", r.kurt_part},
          {"correction", r.correction},
          {"retained_count", r.retained_count},
          {"parts", to_string(r.parts)},
          {"q", r.q},
          {"threshold", r.threshold},
          {"reject", r.reject}};
}

json to_json(const DetectionState& st) {
  json removed = json::array();
  for (auto j : st.removed) removed.push_back(j + 1);
  json trace = json::array();
  for (const auto& r : st.jb_trace) trace.push_back(to_json(r));
  json out = {{"n", st.n},
              {"removed", removed},
              {"k_star", st.k_star},
              {"exhausted", st.exhausted},
              {"jb_trace", trace},
              {"final_report", to_json(st.final_report)}};
  out["threshold_r"] = st.threshold_r ? json(*st.threshold_r) : json(nullptr);
  return out;
}

json to_json(const McSummary& s) {
  json cols = json::object();
  for (const auto& c : s.columns) cols[c.name] = {{"mean", c.mean}, {"sd", c.sd}};
  return {{"scenario", s.scenario},
          {"model", s.model},
          {"n", s.n},
          {"h", s.h},
          {"horizon", s.horizon},
          {"fixed_jump_count", s.fixed_jump_count},
          {"jump_law", s.jump_law},
          {"q", s.q},
          {"replications", s.replications},
          {"seed", s.seed},
          {"batch", s.batch},
          {"columns", cols},
          {"mean_k_star", s.mean_k_star},
          {"mean_recall", s.mean_recall},
          {"failures", s.failures},
          {"successes", s.successes}};
}

json scenario_to_json(const Scenario& s) {
  json j = {{"name", s.name},
            {"model", s.model},
            {"alpha0", s.theta.alpha0},
            {"beta0", s.theta.beta0},
            {"n", s.n},
            {"h", s.h},
            {"refine", s.refine},
            {"x0", s.x0},
            {"jump_law", jump_law_to_json(s.jump_law)},
            {"replications", s.replications},
            {"seed", s.seed},
            {"q", s.detect.q},
            {"batch", s.detect.batch},
            {"parts", to_string(s.detect.parts)},
            {"jb_alpha", s.detect.jb_alpha == JbAlpha::OneStep ? "onestep" : "lse"}};
  j["fixed_jump_count"] =
      s.fixed_jump_count ? json(*s.fixed_jump_count) : json(nullptr);
  j["k_max"] = s.detect.k_max ? json(*s.detect.k_max) : json(nullptr);
  return j;
}

Scenario scenario_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"name", "model", "alpha0", "beta0", "n", "h", "refine", "x0",
                       "jump_law", "fixed_jump_count", "replications", "seed", "q",
                       "batch", "parts", "jb_alpha", "k_max"},
                      "scenario");
  Scenario s;
  try {
    s.name = j.value("name", s.name);
    s.model = j.value("model", s.model);
    if (j.contains("alpha0")) s.theta.alpha0 = vector_field(j.at("alpha0"));
    if (j.contains("beta0")) s.theta.beta0 = vector_field(j.at("beta0"));
    s.n = j.value("n", s.n);
    s.h = j.value("h", s.h);
    s.refine = j.value("refine", s.refine);
    s.x0 = j.value("x0", s.x0);
    if (j.contains("jump_law")) s.jump_law = jump_law_from_json(j.at("jump_law"));
    if (j.contains("fixed_jump_count") && !j.at("fixed_jump_count").is_null()) {
      s.fixed_jump_count = j.at("fixed_jump_count").get<std::size_t>();
    }
    s.replications = j.value("replications", s.replications);
    s.seed = j.value("seed", s.seed);
    s.detect.q = j.value("q", s.detect.q);
    s.detect.batch = j.value("batch", s.detect.batch);
    s.detect.parts = parse_jb_parts(j.value("parts", std::string("both")));
    const std::string jb_alpha = j.value("jb_alpha", std::string("onestep"));
    if (jb_alpha == "onestep") {
      s.detect.jb_alpha = JbAlpha::OneStep;
    } else if (jb_alpha == "lse") {
      s.detect.jb_alpha = JbAlpha::Lse;
    } else {
      throw InvalidArgument("jb_alpha must be onestep|lse");
    }
    if (j.contains("k_max") && !j.at("k_max").is_null()) {
      s.detect.k_max = j.at("k_max").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario read_scenario(const std::filesystem::path& file) {
  json j;
  try {
    j = json::parse(read_text_file(file));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("scenario file '" + file.string() + "': " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace jbjump
