#include "jbjump/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jbjump/errors.hpp"
#include "jbjump/rng.hpp"

namespace jbjump {

namespace {

struct Stepper {
  const ModelSpec& m;
  std::span<const double> alpha;
  std::span<const double> beta;

  double drift(double x) const { return dot(m.eval_B(x), beta); }

  double vol(double x) const {
    const double a2 = dot(m.eval_A(x), alpha);
    if (!(a2 > 0.0)) {
      throw NonPositiveDiffusion(x, {alpha.begin(), alpha.end()}, a2);
    }
    return std::sqrt(a2);
  }

  double step(double x, double dt, double dw) const {
    return x + drift(x) * dt + vol(x) * dw;
  }
};

double draw_jump_size(RngStream& rng, const JumpLaw& law) {
  if (const auto* g = std::get_if<GammaLaw>(&law.kind)) {
    return sample_gamma(rng, g->shape, g->rate);
  }
  if (const auto* b = std::get_if<BilateralIGLaw>(&law.kind)) {
    return sample_bilateral_ig(rng, b->delta1, b->gamma1, b->delta2, b->gamma2);
  }
  throw InvalidArgument("jumps requested but the jump law is 'none'");
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("h must be positive and finite");
  }
  if (refine < 1) throw InvalidArgument("refine must be >= 1");
  if (!std::isfinite(x0)) throw InvalidArgument("x0 must be finite");
}

SamplePath simulate_path(const ModelSpec& m, const SimConfig& cfg) {
  cfg.validate();
  validate_theta(m, cfg.theta);

  const RngStream root(cfg.seed, cfg.stream_id);
  RngStream jump_rng = root.split(0);
  RngStream bm_rng = root.split(1);
  RngStream bridge_rng = root.split(2);

  const double horizon = cfg.horizon();
  const std::size_t n_fine = cfg.n * cfg.refine;
  const double dt = cfg.h / static_cast<double>(cfg.refine);
  const double sqrt_dt = std::sqrt(dt);

  std::size_t n_jumps = 0;
  if (cfg.fixed_jump_count) {
    n_jumps = *cfg.fixed_jump_count;
  } else if (m.jump_law.fires()) {
    n_jumps = static_cast<std::size_t>(
        sample_poisson_count(jump_rng, m.jump_law.intensity * horizon));
  }

  // Given the count, Poisson jump times are sorted i.i.d. uniforms on (0, T].
  std::vector<double> times(n_jumps);
  for (auto& t : times) t = jump_rng.uniform() * horizon;
  std::sort(times.begin(), times.end());

  SamplePath path;
  path.config = cfg;
  path.model_name = m.name;
  path.jump_law = m.jump_law;
  path.jump_marks.resize(n_jumps);
  path.jump_counts.assign(cfg.n, 0);

  // Fine step s covers (s*dt, (s+1)*dt]; the interval follows from the step.
  std::vector<std::size_t> fine_step(n_jumps);
  for (std::size_t i = 0; i < n_jumps; ++i) {
    auto& mark = path.jump_marks[i];
    mark.time = times[i];
    mark.size = draw_jump_size(jump_rng, m.jump_law);
    const double pos = std::ceil(times[i] / dt) - 1.0;
    fine_step[i] = static_cast<std::size_t>(
        std::clamp(pos, 0.0, static_cast<double>(n_fine - 1)));
    mark.interval = fine_step[i] / cfg.refine + 1;
    ++path.jump_counts[mark.interval - 1];
  }

  const Stepper stepper{m, cfg.theta.alpha0, cfg.theta.beta0};

  path.x.resize(cfg.n + 1);
  path.x_cont.resize(cfg.n + 1);
  double state = cfg.x0;
  double jump_sum = 0.0;
  path.x[0] = state;
  path.x_cont[0] = state - jump_sum;

  std::size_t next_jump = 0;
  for (std::size_t s = 0; s < n_fine; ++s) {
    const double dw = sqrt_dt * sample_normal(bm_rng);
    if (next_jump < n_jumps && fine_step[next_jump] == s) {
      const double t_end = static_cast<double>(s + 1) * dt;
      double t_cur = static_cast<double>(s) * dt;
      double w_cur = 0.0;
      while (next_jump < n_jumps && fine_step[next_jump] == s) {
        auto& mark = path.jump_marks[next_jump];
        const double tau = std::clamp(mark.time, t_cur, t_end);
        const double rem = t_end - t_cur;
        const double len = tau - t_cur;
        double w_tau = w_cur;
        if (rem > 0.0) {
          w_tau += len / rem * (dw - w_cur) +
                   std::sqrt(std::max(0.0, len * (rem - len) / rem)) *
                       sample_normal(bridge_rng);
        }
        state = stepper.step(state, len, w_tau - w_cur);
        mark.pre_state = state;
        mark.increment = m.c(state) * mark.size;
        state += mark.increment;
        jump_sum += mark.increment;
        t_cur = tau;
        w_cur = w_tau;
        ++next_jump;
      }
      state = stepper.step(state, t_end - t_cur, dw - w_cur);
    } else {
      state = stepper.step(state, dt, dw);
    }
    if (!std::isfinite(state)) throw SimulationDiverged(s);
    if ((s + 1) % cfg.refine == 0) {
      const std::size_t j = (s + 1) / cfg.refine;
      path.x[j] = state;
      path.x_cont[j] = state - jump_sum;
    }
  }
  return path;
}

std::vector<double> euler_path(const ModelSpec& m, const ThetaTrue& theta,
                               double x0, double h, std::size_t refine,
                               std::span<const double> dw) {
  if (refine < 1 || dw.size() % refine != 0) {
    throw InvalidArgument("increment count must be a multiple of refine");
  }
  validate_theta(m, theta);
  const Stepper stepper{m, theta.alpha0, theta.beta0};
  const double dt = h / static_cast<double>(refine);
  std::vector<double> out;
  out.reserve(dw.size() / refine + 1);
  double state = x0;
  out.push_back(state);
  for (std::size_t s = 0; s < dw.size(); ++s) {
    state = stepper.step(state, dt, dw[s]);
    if (!std::isfinite(state)) throw SimulationDiverged(s);
    if ((s + 1) % refine == 0) out.push_back(state);
  }
  return out;
}

MomentCheck interval_moment_check(const ModelSpec& m, const SimConfig& cfg,
                                  std::size_t n_mc) {
  cfg.validate();
  validate_theta(m, cfg.theta);
  if (n_mc < 2) throw InvalidArgument("n_mc must be >= 2");

  const Stepper stepper{m, cfg.theta.alpha0, cfg.theta.beta0};
  const double dt = cfg.h / static_cast<double>(cfg.refine);
  const double sqrt_dt = std::sqrt(dt);
  RngStream rng = RngStream(cfg.seed, cfg.stream_id).split(1);

  MomentCheck out;
  out.a2 = eval_diffusion_sq(m, cfg.x0, cfg.theta.alpha0);
  const double s2 = cfg.h * out.a2;
  const double s4 = s2 * s2;

  double sum2 = 0.0;
  double sumsq2 = 0.0;
  double sum4 = 0.0;
  double sumsq4 = 0.0;
  for (std::size_t r = 0; r < n_mc; ++r) {
    double state = cfg.x0;
    for (std::size_t s = 0; s < cfg.refine; ++s) {
      state = stepper.step(state, dt, sqrt_dt * sample_normal(rng));
    }
    const double d = state - cfg.x0;
    const double r2 = d * d / s2;
    const double r4 = d * d * d * d / s4;
    sum2 += r2;
    sumsq2 += r2 * r2;
    sum4 += r4;
    sumsq4 += r4 * r4;
  }
  const double nn = static_cast<double>(n_mc);
  out.second_ratio = sum2 / nn;
  out.fourth_ratio = sum4 / nn;
  const double var2 = (sumsq2 - nn * out.second_ratio * out.second_ratio) / (nn - 1.0);
  const double var4 = (sumsq4 - nn * out.fourth_ratio * out.fourth_ratio) / (nn - 1.0);
  out.second_se = std::sqrt(std::max(0.0, var2) / nn);
  out.fourth_se = std::sqrt(std::max(0.0, var4) / nn);
  return out;
}

}  // namespace jbjump
