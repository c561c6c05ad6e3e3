#pragma once

#include <span>
#include <vector>

#include "jbjump/model.hpp"
#include "jbjump/retained.hpp"

namespace jbjump {

struct ResidualOptions {
  /// Subtract h * B(x)^T beta from each increment before scaling.
  bool drift_corrected = false;
  std::vector<double> beta;
};

/// eps[i] = (x[i+1] - x[i] [- h B(x[i])^T beta]) / sqrt(A(x[i])^T alpha * h)
/// for i = 0..n-1. Throws NonPositiveDiffusion carrying the interval index.
std::vector<double> euler_residuals(const ModelSpec& m,
                                    std::span<const double> x, double h,
                                    std::span<const double> alpha,
                                    const ResidualOptions& opts = {});

struct ResidualSet {
  std::vector<double> eps;
  RetainedSet retained;
  double mean = 0.0;  ///< trimmed mean over retained
  double var = 0.0;   ///< trimmed variance, divisor |retained|
  /// (eps - mean)/sqrt(var) on retained intervals, NaN elsewhere.
  std::vector<double> normalized;
};

/// Self-normalizes eps over the retained intervals.
/// Throws DegenerateVariance when var <= 1e-300, InvalidArgument when
/// fewer than two intervals are retained.
ResidualSet normalize(std::vector<double> eps, const RetainedSet& retained);

}  // namespace jbjump
