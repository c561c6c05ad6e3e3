#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jbjump/estimators.hpp"
#include "jbjump/jbtest.hpp"
#include "jbjump/model.hpp"
#include "jbjump/retained.hpp"

namespace jbjump {

/// Which diffusion estimate is plugged into the residuals of the JB test.
enum class JbAlpha { OneStep, Lse };

struct DetectOptions {
  double q = 1e-3;
  /// Largest retained increments removed per rejection (1 = one at a time).
  std::size_t batch = 1;
  JbParts parts = JbParts::Both;
  JbAlpha jb_alpha = JbAlpha::OneStep;
  /// Removal cap; defaults to n/2.
  std::optional<std::size_t> k_max;
};

struct DetectionState {
  std::size_t n = 0;
  /// Removed intervals (0-based) in removal order, largest |dX| first.
  std::vector<std::size_t> removed;
  /// One entry per test; the last one accepted unless `exhausted`.
  std::vector<JbResult> jb_trace;
  std::size_t k_star = 0;
  /// |dX| of the last removed interval; empty when nothing was removed.
  std::optional<double> threshold_r;
  EstimateReport final_report;
  RetainedSet retained;
  /// The removal cap was reached while the test still rejected.
  bool exhausted = false;
};

/// Alternates estimation on the retained intervals, the JB test, and
/// removal of the largest remaining |dX| (ties go to the smaller index)
/// until the test accepts. Estimation always uses the original
/// (X_{t_{j-1}}, dX_j) pairs of the retained intervals.
DetectionState detect(const ModelSpec& m, std::span<const double> x, double h,
                      const DetectOptions& opts = {});

/// detect() with opts.batch overridden.
DetectionState detect_batched(const ModelSpec& m, std::span<const double> x,
                              double h, DetectOptions opts, std::size_t batch);

struct Classification {
  std::vector<std::size_t> one_jump;  ///< sorted, 0-based
  std::vector<std::size_t> no_jump;   ///< sorted, 0-based
};

Classification classify(const DetectionState& state, std::size_t n);

/// Fraction of intervals with a true jump that were removed; empty when
/// the path has no jump.
std::optional<double> detection_recall(const DetectionState& state,
                                       std::span<const std::size_t> jump_counts);

}  // namespace jbjump
