#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jbjump/model.hpp"

namespace jbjump {

struct SimConfig {
  std::size_t n = 1000;         ///< observation intervals
  double h = 0.03;              ///< observation step
  std::size_t refine = 10;      ///< Euler sub-steps per interval
  double x0 = 0.0;
  ThetaTrue theta;
  /// When set, exactly this many jumps are placed uniformly on (0, n*h].
  std::optional<std::size_t> fixed_jump_count;
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;

  double horizon() const noexcept { return static_cast<double>(n) * h; }
  void validate() const;
};

struct JumpMark {
  double time = 0.0;
  double size = 0.0;          ///< xi
  double pre_state = 0.0;     ///< X(tau-)
  double increment = 0.0;     ///< c(X(tau-)) * xi
  std::size_t interval = 0;   ///< 1-based j with tau in (t_{j-1}, t_j]
};

struct SamplePath {
  std::vector<double> x;                ///< X at t_0..t_n
  std::vector<double> x_cont;           ///< X minus accumulated jump terms
  std::vector<std::size_t> jump_counts; ///< per interval, index j-1 for interval j
  std::vector<JumpMark> jump_marks;
  SimConfig config;
  std::string model_name;
  JumpLaw jump_law;

  std::size_t n() const noexcept { return jump_counts.size(); }
  double h() const noexcept { return config.h; }
};

/// Euler-Maruyama on the grid of step h/refine with exact compound Poisson
/// jump times. Jumps inside a fine step are placed with a Brownian bridge
/// conditioned on the step's increment, so the Brownian path on the fine
/// grid does not depend on the jump configuration.
///
/// The stream (seed, stream_id) is split into jump, Brownian and bridge
/// sub-streams; paths with and without jumps share their fine-grid noise.
SamplePath simulate_path(const ModelSpec& m, const SimConfig& cfg);

/// Jump-free Euler path driven by explicit fine-grid Brownian increments.
/// dw.size() must be a multiple of refine; returns the coarse grid values.
std::vector<double> euler_path(const ModelSpec& m, const ThetaTrue& theta,
                               double x0, double h, std::size_t refine,
                               std::span<const double> dw);

struct MomentCheck {
  double a2 = 0.0;             ///< A(x)^T alpha0 at the start state
  double second_ratio = 0.0;   ///< E[(dX)^2] / (h a2)
  double second_se = 0.0;
  double fourth_ratio = 0.0;   ///< E[(dX)^4] / (h^2 a2^2)
  double fourth_se = 0.0;
};

/// Monte Carlo moments of one jump-free increment from X = cfg.x0 over
/// [0, cfg.h] (cfg.refine sub-steps), compared with a^2 and 3 a^4.
MomentCheck interval_moment_check(const ModelSpec& m, const SimConfig& cfg,
                                  std::size_t n_mc);

}  // namespace jbjump
