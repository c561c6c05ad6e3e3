#include "jbjump/jbtest.hpp"

#include <cmath>

#include "jbjump/errors.hpp"
#include "jbjump/residuals.hpp"
#include "jbjump/rng.hpp"

namespace jbjump {

JbParts parse_jb_parts(const std::string& s) {
  if (s == "both") return JbParts::Both;
  if (s == "skew") return JbParts::Skew;
  if (s == "kurt") return JbParts::Kurt;
  throw InvalidArgument("parts must be one of both|skew|kurt, got '" + s + "'");
}

std::string to_string(JbParts p) {
  switch (p) {
    case JbParts::Skew: return "skew";
    case JbParts::Kurt: return "kurt";
    case JbParts::Both: break;
  }
  return "both";
}

double diffusion_derivative(const ModelSpec& m, double x,
                            std::span<const double> alpha) {
  const double a2 = eval_diffusion_sq(m, x, alpha);
  return dot(m.eval_dA(x), alpha) / (2.0 * std::sqrt(a2));
}

JbFields jb_statistic(const ModelSpec& m, std::span<const double> x, double h,
                      std::span<const double> alpha_hat,
                      const RetainedSet& retained, JbParts parts) {
  if (retained.size() < 5) {
    throw InvalidArgument("Jarque-Bera statistic needs at least 5 retained intervals");
  }
  const ResidualSet rs = normalize(euler_residuals(m, x, h, alpha_hat), retained);

  double sum3 = 0.0;
  double sum4 = 0.0;
  double sum_da = 0.0;
  for (std::size_t i = 0; i < rs.normalized.size(); ++i) {
    if (!retained.contains(i)) continue;
    const double z = rs.normalized[i];
    const double z2 = z * z;
    sum3 += z2 * z;
    sum4 += z2 * z2 - 3.0;
    sum_da += diffusion_derivative(m, x[i], alpha_hat);
  }

  JbFields f;
  f.parts = parts;
  f.retained_count = retained.size();
  const double cnt = static_cast<double>(retained.size());
  f.correction = 3.0 * std::sqrt(h) * sum_da;
  const double skew = sum3 - f.correction;
  f.skew_part = skew * skew / (6.0 * cnt);
  f.kurt_part = sum4 * sum4 / (24.0 * cnt);
  switch (parts) {
    case JbParts::Both: f.jb = f.skew_part + f.kurt_part; break;
    case JbParts::Skew: f.jb = f.skew_part; break;
    case JbParts::Kurt: f.jb = f.kurt_part; break;
  }
  return f;
}

JbResult jb_test(const JbFields& fields, double q) {
  JbResult r;
  static_cast<JbFields&>(r) = fields;
  r.q = q;
  r.threshold = fields.parts == JbParts::Both ? chisq2_upper_quantile(q)
                                              : chisq1_upper_quantile(q);
  r.reject = fields.jb > r.threshold;
  return r;
}

}  // namespace jbjump
