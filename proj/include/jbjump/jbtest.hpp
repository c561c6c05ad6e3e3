#pragma once

#include <span>
#include <string>

#include "jbjump/model.hpp"
#include "jbjump/retained.hpp"

namespace jbjump {

enum class JbParts { Both, Skew, Kurt };

JbParts parse_jb_parts(const std::string& s);
std::string to_string(JbParts p);

struct JbFields {
  double jb = 0.0;          ///< sum of the parts selected by `parts`
  double skew_part = 0.0;   ///< (sum N^3 - correction)^2 / (6 m)
  double kurt_part = 0.0;   ///< (sum (N^4 - 3))^2 / (24 m)
  double correction = 0.0;  ///< 3 sqrt(h) sum d/dx a(x_{j-1}, alpha)
  std::size_t retained_count = 0;  ///< m = n - k
  JbParts parts = JbParts::Both;
};

struct JbResult : JbFields {
  double q = 0.0;
  double threshold = 0.0;
  bool reject = false;
};

/// Bias-corrected Jarque-Bera statistic over the retained intervals. The
/// residual sums and the sqrt(h) correction sum run over the same set.
/// Requires at least 5 retained intervals.
JbFields jb_statistic(const ModelSpec& m, std::span<const double> x, double h,
                      std::span<const double> alpha_hat,
                      const RetainedSet& retained,
                      JbParts parts = JbParts::Both);

/// Compares against the upper-q chi-square quantile (2 df for both parts,
/// 1 df for a single part). Rejects on strict inequality only.
JbResult jb_test(const JbFields& fields, double q);

/// d/dx sqrt(A(x)^T alpha) = dA(x)^T alpha / (2 sqrt(A(x)^T alpha)).
double diffusion_derivative(const ModelSpec& m, double x,
                            std::span<const double> alpha);

}  // namespace jbjump
