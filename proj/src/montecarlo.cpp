#include "jbjump/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "jbjump/errors.hpp"
#include "jbjump/simulate.hpp"
#include "jbjump/textio.hpp"

namespace jbjump {

void Scenario::validate() const {
  if (replications < 1) throw InvalidArgument("replications must be >= 1");
  if (n < 10) throw InvalidArgument("n must be >= 10");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("h must be positive");
  if (refine < 1) throw InvalidArgument("refine must be >= 1");
  if (!(detect.q > 0.0 && detect.q < 1.0)) {
    throw InvalidArgument("q must lie in (0, 1)");
  }
  if (detect.batch < 1) throw InvalidArgument("batch must be >= 1");
  if (fixed_jump_count && *fixed_jump_count > 0 &&
      std::holds_alternative<NoJumpLaw>(jump_law.kind)) {
    throw InvalidArgument("fixed_jump_count > 0 requires a jump size law");
  }
  validate_theta(builtin_model(model), theta);
}

const ColumnStat& McSummary::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("no summary column named '" + name + "'");
}

ReplicationResult run_replication(const ModelSpec& model, const Scenario& s,
                                  std::size_t index) {
  ReplicationResult r;
  ModelSpec m = model;
  m.jump_law = s.jump_law;
  try {
    SimConfig cfg;
    cfg.n = s.n;
    cfg.h = s.h;
    cfg.refine = s.refine;
    cfg.x0 = s.x0;
    cfg.theta = s.theta;
    cfg.fixed_jump_count = s.fixed_jump_count;
    cfg.seed = s.seed;
    cfg.stream_id = index;
    const SamplePath path = simulate_path(m, cfg);

    r.full = estimate(m, path.x, s.h, RetainedSet::all(s.n));
    const DetectionState st = detect(m, path.x, s.h, s.detect);
    r.detected = st.final_report;
    r.jb0 = st.jb_trace.front();
    r.k_star = st.k_star;
    r.exhausted = st.exhausted;
    r.recall = detection_recall(st, path.jump_counts);
    r.true_jump_intervals = static_cast<std::size_t>(
        std::count_if(path.jump_counts.begin(), path.jump_counts.end(),
                      [](std::size_t c) { return c > 0; }));

    OracleReport oracle = oracle_estimates(m, path);
    r.true_no_jump = std::move(oracle.true_no_jump);
    r.cont = std::move(oracle.cont);
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

std::vector<ReplicationResult> run_replications(const Scenario& s,
                                                std::size_t jobs) {
  s.validate();
  const ModelSpec m = builtin_model(s.model);

  std::vector<ReplicationResult> out(s.replications);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, s.replications);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      out[i] = run_replication(m, s, i);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  return out;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

namespace {

std::string component_name(const std::string& base, std::size_t i, std::size_t p) {
  return p == 1 ? base : base + "_" + std::to_string(i + 1);
}

}  // namespace

McSummary summarize(const Scenario& s,
                    const std::vector<ReplicationResult>& reps) {
  const ModelSpec m = builtin_model(s.model);
  McSummary out;
  out.scenario = s.name;
  out.model = s.model;
  out.n = s.n;
  out.h = s.h;
  out.horizon = static_cast<double>(s.n) * s.h;
  out.fixed_jump_count =
      s.fixed_jump_count ? static_cast<long long>(*s.fixed_jump_count) : -1;
  out.jump_law = s.jump_law.describe();
  out.q = s.detect.q;
  out.replications = s.replications;
  out.seed = s.seed;
  out.batch = s.detect.batch;

  struct Source {
    const char* label;
    const EstimateReport ReplicationResult::*report;
  };
  const Source sources[] = {
      {"0", &ReplicationResult::full},
      {"kn", &ReplicationResult::detected},
      {"kstar", &ReplicationResult::true_no_jump},
  };
  for (const auto& src : sources) {
    for (int which = 0; which < 2; ++which) {
      const std::size_t p = which == 0 ? m.p_alpha : m.p_beta;
      const std::string base = std::string(which == 0 ? "alpha_" : "beta_") + src.label;
      for (std::size_t i = 0; i < p; ++i) {
        std::vector<double> vals;
        for (const auto& r : reps) {
          if (!r.ok) continue;
          const EstimateReport& rep = r.*(src.report);
          vals.push_back(which == 0 ? rep.alpha_onestep[i] : rep.beta[i]);
        }
        out.columns.push_back({component_name(base, i, p), sample_mean(vals), sample_sd(vals)});
      }
    }
  }

  std::vector<double> kstar;
  std::vector<double> recall;
  for (const auto& r : reps) {
    if (!r.ok) {
      ++out.failures;
      continue;
    }
    ++out.successes;
    kstar.push_back(static_cast<double>(r.k_star));
    if (r.recall) recall.push_back(*r.recall);
  }
  out.mean_k_star = sample_mean(kstar);
  out.mean_recall = sample_mean(recall);
  return out;
}

McSummary run_scenario(const Scenario& s, std::size_t jobs) {
  const auto reps = run_replications(s, jobs);
  const bool any_ok = std::any_of(reps.begin(), reps.end(),
                                  [](const ReplicationResult& r) { return r.ok; });
  if (!any_ok) {
    throw Error("all " + std::to_string(reps.size()) +
                " replications failed; first error: " + reps.front().error);
  }
  return summarize(s, reps);
}

namespace {

const char* const kFixedHeader[] = {
    "scenario", "model", "n", "h", "T", "k_fixed", "jump_law", "q",
    "replications", "seed", "batch"};
const char* const kTrailHeader[] = {"mean_k_star", "mean_recall", "failures",
                                    "successes"};

std::string mean_sd(const ColumnStat& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f (%.2f)", c.mean, c.sd);
  return buf;
}

}  // namespace

TableOutput emit_table(const std::vector<McSummary>& summaries) {
  if (summaries.empty()) throw InvalidArgument("no summaries to tabulate");
  const auto& cols = summaries.front().columns;
  for (const auto& s : summaries) {
    if (s.columns.size() != cols.size()) {
      throw InvalidArgument("summaries have different column layouts");
    }
  }

  TableOutput out;
  std::ostringstream csv;
  for (const char* f : kFixedHeader) csv << f << ",";
  for (const auto& c : cols) csv << c.name << "_mean," << c.name << "_sd,";
  for (std::size_t i = 0; i < std::size(kTrailHeader); ++i) {
    csv << kTrailHeader[i] << (i + 1 < std::size(kTrailHeader) ? "," : "\n");
  }
  for (const auto& s : summaries) {
    csv << csv_quote(s.scenario) << "," << csv_quote(s.model) << "," << s.n << ","
        << format_double(s.h) << "," << format_double(s.horizon) << ","
        << s.fixed_jump_count << "," << csv_quote(s.jump_law) << ","
        << format_double(s.q) << "," << s.replications << "," << s.seed << ","
        << s.batch << ",";
    for (const auto& c : s.columns) {
      csv << format_double(c.mean) << "," << format_double(c.sd) << ",";
    }
    csv << format_double(s.mean_k_star) << "," << format_double(s.mean_recall)
        << "," << s.failures << "," << s.successes << "\n";
  }
  out.csv = csv.str();

  // Text layout: T n h k* followed by "mean (sd)" per estimator column.
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"scenario", "T", "n", "h", "k*"};
  for (const auto& c : cols) header.push_back(c.name);
  header.push_back("mean k_n");
  header.push_back("recall");
  header.push_back("fail");
  rows.push_back(header);
  for (const auto& s : summaries) {
    char buf[64];
    std::vector<std::string> row = {s.scenario};
    std::snprintf(buf, sizeof buf, "%.1f", s.horizon);
    row.emplace_back(buf);
    row.push_back(std::to_string(s.n));
    std::snprintf(buf, sizeof buf, "%g", s.h);
    row.emplace_back(buf);
    row.push_back(s.fixed_jump_count < 0 ? "-" : std::to_string(s.fixed_jump_count));
    for (const auto& c : s.columns) row.push_back(mean_sd(c));
    std::snprintf(buf, sizeof buf, "%.2f", s.mean_k_star);
    row.emplace_back(buf);
    std::snprintf(buf, sizeof buf, "%.3f", s.mean_recall);
    row.emplace_back(buf);
    row.push_back(std::to_string(s.failures));
    rows.push_back(row);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream text;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) text << "  ";
      const std::string& cell = rows[r][i];
      if (i == 0) {
        text << cell << std::string(width[i] - cell.size(), ' ');
      } else {
        text << std::string(width[i] - cell.size(), ' ') << cell;
      }
    }
    text << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      text << std::string(total - 2, '-') << "\n";
    }
  }
  out.text = text.str();
  return out;
}

std::vector<McSummary> parse_summary_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw MalformedRow(1, "missing header");
  const auto header = split_csv_line(line);
  const std::size_t fixed = std::size(kFixedHeader);
  const std::size_t trail = std::size(kTrailHeader);
  if (header.size() < fixed + trail || (header.size() - fixed - trail) % 2 != 0) {
    throw MalformedRow(1, "unexpected summary header");
  }
  const std::size_t ncols = (header.size() - fixed - trail) / 2;

  std::vector<McSummary> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw MalformedRow(lineno, "expected " + std::to_string(header.size()) + " fields");
    }
    try {
      McSummary s;
      s.scenario = f[0];
      s.model = f[1];
      s.n = std::stoull(f[2]);
      s.h = parse_double(f[3]);
      s.horizon = parse_double(f[4]);
      s.fixed_jump_count = std::stoll(f[5]);
      s.jump_law = f[6];
      s.q = parse_double(f[7]);
      s.replications = std::stoull(f[8]);
      s.seed = std::stoull(f[9]);
      s.batch = std::stoull(f[10]);
      for (std::size_t c = 0; c < ncols; ++c) {
        std::string name = header[fixed + 2 * c];
        name.resize(name.size() - std::string("_mean").size());
        s.columns.push_back({name, parse_double(f[fixed + 2 * c]),
                             parse_double(f[fixed + 2 * c + 1])});
      }
      const std::size_t t = fixed + 2 * ncols;
      s.mean_k_star = parse_double(f[t]);
      s.mean_recall = parse_double(f[t + 1]);
      s.failures = std::stoull(f[t + 2]);
      s.successes = std::stoull(f[t + 3]);
      out.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw MalformedRow(lineno, e.what());
    }
  }
  return out;
}

}  // namespace jbjump
