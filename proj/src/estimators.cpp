#include "jbjump/estimators.hpp"

#include <cmath>
#include <string>

#include "jbjump/errors.hpp"

namespace jbjump {

namespace {

IncrementView observed_view(std::span<const double> x,
                            std::vector<double>& storage) {
  if (x.size() < 2) throw InvalidArgument("need at least two observations");
  storage = IncrementView::diff(x);
  return {x.first(x.size() - 1), storage};
}

void check_view(const ModelSpec& m, IncrementView obs, double h,
                const RetainedSet& retained) {
  if (obs.state.size() != obs.dx.size()) {
    throw InvalidArgument("state and increment arrays differ in length");
  }
  if (retained.universe() != obs.dx.size()) {
    throw InvalidArgument("retained set covers " +
                          std::to_string(retained.universe()) +
                          " intervals but the path has " +
                          std::to_string(obs.dx.size()));
  }
  if (retained.size() == 0) {
    throw SingularNormalMatrix("no intervals retained");
  }
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  if (m.p_alpha > kMaxSolveDim || m.p_beta > kMaxSolveDim) {
    throw InvalidArgument("parameter dimension exceeds 16");
  }
}

void check_alpha(const ModelSpec& m, std::span<const double> alpha) {
  if (alpha.size() != m.p_alpha) {
    throw InvalidArgument("alpha dimension does not match the model");
  }
  for (double a : alpha) {
    if (!std::isfinite(a)) throw InvalidArgument("alpha must be finite");
  }
}

double diffusion_sq_at(const Basis& a_basis, double x,
                       std::span<const double> alpha, std::size_t i) {
  const double v = dot(a_basis, alpha);
  if (!(v > 0.0)) {
    throw NonPositiveDiffusion(x, {alpha.begin(), alpha.end()}, v,
                               static_cast<std::ptrdiff_t>(i));
  }
  return v;
}

std::span<const double> head(const Basis& b, std::size_t p) {
  return {b.data(), p};
}

Estimate to_estimate(SolveResult r) { return {std::move(r.solution), r.rcond}; }

}  // namespace

std::vector<double> IncrementView::diff(std::span<const double> x) {
  std::vector<double> d(x.empty() ? 0 : x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return d;
}

Estimate alpha_lse(const ModelSpec& m, IncrementView obs, double h,
                   const RetainedSet& retained) {
  check_view(m, obs, h, retained);
  const std::size_t p = m.p_alpha;
  Matrix normal(p);
  std::vector<double> rhs(p, 0.0);
  for (std::size_t i = 0; i < obs.dx.size(); ++i) {
    if (!retained.contains(i)) continue;
    const Basis a = m.eval_A(obs.state[i]);
    normal.add_outer(head(a, p));
    const double dx2 = obs.dx[i] * obs.dx[i];
    for (std::size_t r = 0; r < p; ++r) rhs[r] += dx2 * a[r];
  }
  for (auto& v : rhs) v /= h;
  return to_estimate(solve_spd(normal, rhs));
}

Estimate alpha_lse(const ModelSpec& m, std::span<const double> x, double h,
                   const RetainedSet& retained) {
  std::vector<double> dx;
  return alpha_lse(m, observed_view(x, dx), h, retained);
}

std::vector<double> gql_alpha_score(const ModelSpec& m, IncrementView obs,
                                    double h, const RetainedSet& retained,
                                    std::span<const double> alpha) {
  check_view(m, obs, h, retained);
  check_alpha(m, alpha);
  const std::size_t p = m.p_alpha;
  std::vector<double> score(p, 0.0);
  for (std::size_t i = 0; i < obs.dx.size(); ++i) {
    if (!retained.contains(i)) continue;
    const Basis a = m.eval_A(obs.state[i]);
    const double v = diffusion_sq_at(a, obs.state[i], alpha, i);
    const double w = 1.0 / v - obs.dx[i] * obs.dx[i] / (h * v * v);
    for (std::size_t r = 0; r < p; ++r) score[r] += w * a[r];
  }
  return score;
}

Estimate alpha_onestep(const ModelSpec& m, IncrementView obs, double h,
                       const RetainedSet& retained,
                       std::span<const double> alpha_init) {
  check_view(m, obs, h, retained);
  check_alpha(m, alpha_init);
  const std::size_t p = m.p_alpha;
  Matrix info(p);
  std::vector<double> score(p, 0.0);
  for (std::size_t i = 0; i < obs.dx.size(); ++i) {
    if (!retained.contains(i)) continue;
    const Basis a = m.eval_A(obs.state[i]);
    const double v = diffusion_sq_at(a, obs.state[i], alpha_init, i);
    info.add_outer(head(a, p), 1.0 / (v * v));
    const double w = 1.0 / v - obs.dx[i] * obs.dx[i] / (h * v * v);
    for (std::size_t r = 0; r < p; ++r) score[r] += w * a[r];
  }
  SolveResult step = solve_spd(info, score);
  Estimate out;
  out.rcond = step.rcond;
  out.value.resize(p);
  for (std::size_t r = 0; r < p; ++r) out.value[r] = alpha_init[r] - step.solution[r];
  return out;
}

Estimate alpha_onestep(const ModelSpec& m, std::span<const double> x, double h,
                       const RetainedSet& retained,
                       std::span<const double> alpha_init) {
  std::vector<double> dx;
  return alpha_onestep(m, observed_view(x, dx), h, retained, alpha_init);
}

Estimate beta_plugin(const ModelSpec& m, IncrementView obs, double h,
                     const RetainedSet& retained,
                     std::span<const double> alpha_hat) {
  check_view(m, obs, h, retained);
  check_alpha(m, alpha_hat);
  const std::size_t p = m.p_beta;
  Matrix normal(p);
  std::vector<double> rhs(p, 0.0);
  for (std::size_t i = 0; i < obs.dx.size(); ++i) {
    if (!retained.contains(i)) continue;
    const double v =
        diffusion_sq_at(m.eval_A(obs.state[i]), obs.state[i], alpha_hat, i);
    const Basis b = m.eval_B(obs.state[i]);
    normal.add_outer(head(b, p), 1.0 / v);
    const double w = obs.dx[i] / v;
    for (std::size_t r = 0; r < p; ++r) rhs[r] += w * b[r];
  }
  for (auto& v : rhs) v /= h;
  return to_estimate(solve_spd(normal, rhs));
}

Estimate beta_plugin(const ModelSpec& m, std::span<const double> x, double h,
                     const RetainedSet& retained,
                     std::span<const double> alpha_hat) {
  std::vector<double> dx;
  return beta_plugin(m, observed_view(x, dx), h, retained, alpha_hat);
}

namespace {

Sigma0 sigma0_view(const ModelSpec& m, IncrementView obs,
                   const RetainedSet& retained,
                   std::span<const double> alpha_hat) {
  Matrix ia(m.p_alpha);
  Matrix ib(m.p_beta);
  for (std::size_t i = 0; i < obs.state.size(); ++i) {
    if (!retained.contains(i)) continue;
    const Basis a = m.eval_A(obs.state[i]);
    const double v = diffusion_sq_at(a, obs.state[i], alpha_hat, i);
    ia.add_outer(head(a, m.p_alpha), 1.0 / (v * v));
    ib.add_outer(head(m.eval_B(obs.state[i]), m.p_beta), 1.0 / v);
  }
  const double inv_count = 1.0 / static_cast<double>(retained.size());
  ia *= inv_count;
  ib *= inv_count;
  Sigma0 out{inverse_spd(ia), inverse_spd(ib)};
  out.alpha *= 2.0;
  return out;
}

}  // namespace

Sigma0 sigma0_plugin(const ModelSpec& m, std::span<const double> x, double h,
                     const RetainedSet& retained,
                     std::span<const double> alpha_hat) {
  std::vector<double> dx;
  const IncrementView obs = observed_view(x, dx);
  check_view(m, obs, h, retained);
  check_alpha(m, alpha_hat);
  return sigma0_view(m, obs, retained, alpha_hat);
}

EstimateReport estimate(const ModelSpec& m, IncrementView obs, double h,
                        const RetainedSet& retained,
                        std::optional<std::vector<double>> alpha_init) {
  EstimateReport rep;
  rep.retained_count = retained.size();
  const Estimate lse = alpha_lse(m, obs, h, retained);
  rep.alpha_lse = lse.value;
  rep.rcond_lse = lse.rcond;
  const Estimate one =
      alpha_onestep(m, obs, h, retained, alpha_init ? *alpha_init : lse.value);
  rep.alpha_onestep = one.value;
  rep.rcond_onestep = one.rcond;
  const Estimate beta = beta_plugin(m, obs, h, retained, one.value);
  rep.beta = beta.value;
  rep.rcond_beta = beta.rcond;

  Sigma0 sigma = sigma0_view(m, obs, retained, one.value);
  rep.sigma_alpha = std::move(sigma.alpha);
  rep.sigma_beta = std::move(sigma.beta);
  return rep;
}

EstimateReport estimate(const ModelSpec& m, std::span<const double> x, double h,
                        const RetainedSet& retained) {
  std::vector<double> dx;
  return estimate(m, observed_view(x, dx), h, retained);
}

OracleReport oracle_estimates(const ModelSpec& m, const SamplePath& path,
                              std::optional<std::vector<double>> alpha_init) {
  const std::size_t n = path.n();
  if (path.x.size() != n + 1 || path.x_cont.size() != n + 1) {
    throw InvalidArgument("sample path lacks the continuous-part annotation");
  }
  const double h = path.h();
  const std::span<const double> states(path.x.data(), n);
  const std::vector<double> dx_cont = IncrementView::diff(path.x_cont);
  const IncrementView cont_view{states, dx_cont};

  OracleReport out;
  out.cont = estimate(m, cont_view, h, RetainedSet::all(n), std::move(alpha_init));

  std::vector<std::size_t> jumpy;
  for (std::size_t i = 0; i < n; ++i) {
    if (path.jump_counts[i] > 0) jumpy.push_back(i);
  }
  out.no_jump_set = RetainedSet::all_except(n, jumpy);
  out.true_no_jump = estimate(m, path.x, h, out.no_jump_set);
  return out;
}

}  // namespace jbjump
