#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace jbjump::cli {

struct RunConfig {
  std::string subcommand;
  std::string model = "sine-vol-ou";

  // simulate
  std::vector<double> alpha{3.0};
  std::vector<double> beta{1.0};
  std::size_t n = 1000;
  double h = 0.03;
  std::size_t refine = 10;
  double x0 = 0.0;
  std::string jumps = "none";
  double lambda = 0.0;
  std::optional<std::size_t> jump_count;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  // analysis
  std::string input;
  std::string retained = "all";
  std::optional<std::vector<double>> alpha_hat;  ///< jbtest --alpha / estimate --alpha-init
  double q = 1e-3;
  std::size_t batch = 1;
  std::string parts = "both";
  std::string jb_alpha = "onestep";
  std::optional<std::size_t> k_max;

  // mc
  std::string scenario;
  std::size_t jobs = 1;
  std::optional<std::size_t> replications;

  std::string out;
};

/// Parse failure: exit code (0 for --help) and the text to print.
struct ParseExit {
  int code = 2;
  std::string message;
};

std::variant<RunConfig, ParseExit> parse_args(int argc, const char* const* argv);

/// Executes a parsed configuration. Returns the process exit code:
/// 0 success, 1 runtime failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run; exit code 2 on usage errors.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jbjump::cli
