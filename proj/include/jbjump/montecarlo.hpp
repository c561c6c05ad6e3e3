#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jbjump/detect.hpp"
#include "jbjump/model.hpp"

namespace jbjump {

struct Scenario {
  std::string name = "scenario";
  std::string model = "sine-vol-ou";
  ThetaTrue theta{{3.0}, {1.0}};
  std::size_t n = 1000;
  double h = 0.03;
  std::size_t refine = 10;
  double x0 = 0.0;
  JumpLaw jump_law;
  std::optional<std::size_t> fixed_jump_count;
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  DetectOptions detect;

  void validate() const;
};

/// Per-replication outcome. Estimates hold the first parameter component
/// in the scalar fields and the full vectors in the report members.
struct ReplicationResult {
  bool ok = false;
  std::string error;

  EstimateReport full;           ///< all intervals
  EstimateReport detected;       ///< terminal retained set of detect()
  EstimateReport true_no_jump;   ///< intervals without a true jump
  EstimateReport cont;           ///< X^cont increments, all intervals
  JbResult jb0;                  ///< first test of the detection loop
  std::size_t k_star = 0;
  bool exhausted = false;
  std::size_t true_jump_intervals = 0;
  std::optional<double> recall;
};

struct ColumnStat {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;  ///< sample sd (divisor R_ok - 1)
};

struct McSummary {
  std::string scenario;
  std::string model;
  std::size_t n = 0;
  double h = 0.0;
  double horizon = 0.0;
  long long fixed_jump_count = -1;  ///< -1 when the count is random
  std::string jump_law;
  double q = 0.0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::size_t batch = 1;

  /// alpha_0, beta_0, alpha_kn, beta_kn, alpha_kstar, beta_kstar (with a
  /// component suffix when the parameter is multivariate).
  std::vector<ColumnStat> columns;
  double mean_k_star = 0.0;
  double mean_recall = 0.0;  ///< over replications with at least one jump
  std::size_t failures = 0;
  std::size_t successes = 0;

  const ColumnStat& column(const std::string& name) const;
};

/// Runs one replication on stream `index`; the scenario's jump law
/// replaces the one carried by `m`.
ReplicationResult run_replication(const ModelSpec& m, const Scenario& s,
                                  std::size_t index);

/// All replications, in index order. jobs = 0 uses the hardware concurrency.
/// Results do not depend on `jobs`.
std::vector<ReplicationResult> run_replications(const Scenario& s,
                                                std::size_t jobs = 1);

McSummary summarize(const Scenario& s,
                    const std::vector<ReplicationResult>& reps);

/// run_replications + summarize. Throws when every replication fails.
McSummary run_scenario(const Scenario& s, std::size_t jobs = 1);

struct TableOutput {
  std::string text;
  std::string csv;
};

TableOutput emit_table(const std::vector<McSummary>& summaries);

/// Inverse of the CSV half of emit_table.
std::vector<McSummary> parse_summary_csv(const std::string& csv);

double sample_mean(const std::vector<double>& v);
/// Sample standard deviation with divisor size-1 (0 for fewer than 2 values).
double sample_sd(const std::vector<double>& v);

}  // namespace jbjump
