#include "jbjump/residuals.hpp"

#include <cmath>
#include <limits>

#include "jbjump/errors.hpp"

namespace jbjump {

std::vector<double> euler_residuals(const ModelSpec& m,
                                    std::span<const double> x, double h,
                                    std::span<const double> alpha,
                                    const ResidualOptions& opts) {
  if (x.size() < 2) throw InvalidArgument("need at least two observations");
  if (alpha.size() != m.p_alpha) {
    throw InvalidArgument("alpha dimension does not match the model");
  }
  if (opts.drift_corrected && opts.beta.size() != m.p_beta) {
    throw InvalidArgument("beta dimension does not match the model");
  }
  const std::size_t n = x.size() - 1;
  std::vector<double> eps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = dot(m.eval_A(x[i]), alpha);
    if (!(a2 > 0.0)) {
      throw NonPositiveDiffusion(x[i], {alpha.begin(), alpha.end()}, a2,
                                 static_cast<std::ptrdiff_t>(i));
    }
    double dx = x[i + 1] - x[i];
    if (opts.drift_corrected) dx -= h * dot(m.eval_B(x[i]), opts.beta);
    eps[i] = dx / std::sqrt(a2 * h);
  }
  return eps;
}

ResidualSet normalize(std::vector<double> eps, const RetainedSet& retained) {
  if (retained.universe() != eps.size()) {
    throw InvalidArgument("retained set does not match the residual count");
  }
  if (retained.size() < 2) {
    throw InvalidArgument("normalization needs at least two retained residuals");
  }
  ResidualSet out;
  out.retained = retained;

  const double count = static_cast<double>(retained.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (retained.contains(i)) sum += eps[i];
  }
  out.mean = sum / count;
  double ss = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (retained.contains(i)) {
      const double d = eps[i] - out.mean;
      ss += d * d;
    }
  }
  out.var = ss / count;
  if (!(out.var > 1e-300)) {
    throw DegenerateVariance("trimmed residual variance is zero; residuals are constant");
  }

  const double inv_sd = 1.0 / std::sqrt(out.var);
  out.normalized.assign(eps.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (retained.contains(i)) out.normalized[i] = (eps[i] - out.mean) * inv_sd;
  }
  out.eps = std::move(eps);
  return out;
}

}  // namespace jbjump
