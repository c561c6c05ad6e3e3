#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "jbjump/errors.hpp"
#include "jbjump/rng.hpp"
#include "jbjump/simulate.hpp"
#include "support.hpp"

using namespace jbjump;

namespace {

ModelSpec with_jumps(const std::string& name, JumpLaw law) {
  auto m = builtin_model(name);
  m.jump_law = law;
  return m;
}

SimConfig table1_config(std::uint64_t stream) {
  SimConfig cfg;
  cfg.n = 1000;
  cfg.h = 0.03;
  cfg.theta = {{3.0}, {1.0}};
  cfg.fixed_jump_count = 15;
  cfg.seed = 77;
  cfg.stream_id = stream;
  return cfg;
}

}  // namespace

TEST_CASE("pure Brownian motion has variance T") {
  const auto m = builtin_model("const-ou");
  SimConfig cfg;
  cfg.n = 50;
  cfg.h = 0.02;
  cfg.refine = 2;
  cfg.theta = {{1.0}, {0.0}};
  std::vector<double> ends;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    cfg.stream_id = r;
    const auto p = simulate_path(m, cfg);
    ends.push_back(p.x.back());
  }
  const auto mo = jbjump::testing::moments(ends);
  CHECK(std::fabs(mo.var - cfg.horizon()) < 0.05 * cfg.horizon());
}

TEST_CASE("no jumps gives x == x_cont") {
  const auto m = with_jumps("sine-vol-ou", {GammaLaw{4.0, 1.0}, 0.0});
  SimConfig cfg;
  cfg.n = 500;
  cfg.theta = {{3.0}, {1.0}};
  const auto p = simulate_path(m, cfg);
  REQUIRE(p.x.size() == 501);
  CHECK(p.x == p.x_cont);
  CHECK(std::all_of(p.jump_counts.begin(), p.jump_counts.end(),
                    [](std::size_t c) { return c == 0; }));
  CHECK(p.jump_marks.empty());
}

TEST_CASE("fixed jump count is honoured") {
  const auto m = with_jumps("sine-vol-ou", {GammaLaw{4.0, 1.0}, 0.5});
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto p = simulate_path(m, table1_config(r));
    CHECK(std::accumulate(p.jump_counts.begin(), p.jump_counts.end(), std::size_t{0}) == 15);
    REQUIRE(p.jump_marks.size() == 15);
    for (std::size_t i = 0; i < p.jump_marks.size(); ++i) {
      const auto& mk = p.jump_marks[i];
      CHECK(mk.time > 0.0);
      CHECK(mk.time <= 30.0);
      CHECK(mk.size > 0.0);
      if (i) CHECK(p.jump_marks[i - 1].time <= mk.time);
      // tau lies in (t_{j-1}, t_j] up to the fine-grid rounding
      CHECK(mk.time > (static_cast<double>(mk.interval) - 1.0) * 0.03 - 1e-12);
      CHECK(mk.time <= static_cast<double>(mk.interval) * 0.03 + 1e-12);
    }
  }
}

TEST_CASE("jump bookkeeping") {
  const auto g = with_jumps("sine-vol-ou", {GammaLaw{4.0, 1.0}, 0.5});
  const auto b = with_jumps("sine-vol-ou", {BilateralIGLaw{2.0, 1.0, 4.0, 1.0}, 2.0});
  for (const auto* m : {&g, &b}) {
    for (std::uint64_t r = 0; r < 10; ++r) {
      SimConfig cfg = table1_config(r);
      cfg.fixed_jump_count.reset();
      const auto p = simulate_path(*m, cfg);
      CHECK(p.x_cont[0] == p.x[0]);
      std::vector<double> per_interval(p.n(), 0.0);
      for (const auto& mk : p.jump_marks) {
        CHECK(mk.increment == m->c(mk.pre_state) * mk.size);
        per_interval[mk.interval - 1] += mk.increment;
      }
      for (std::size_t j = 1; j <= p.n(); ++j) {
        const double lhs = (p.x[j] - p.x_cont[j]) - (p.x[j - 1] - p.x_cont[j - 1]);
        const double scale = std::max({1.0, std::fabs(p.x[j]), std::fabs(p.x_cont[j])});
        CHECK(std::fabs(lhs - per_interval[j - 1]) <= 1e-10 * scale);
        if (p.jump_counts[j - 1] == 0) {
          CHECK(std::fabs((p.x[j] - p.x[j - 1]) - (p.x_cont[j] - p.x_cont[j - 1])) <=
                1e-12 * scale);
        }
      }
    }
  }
}

TEST_CASE("poisson jump count scales with intensity") {
  const auto m = with_jumps("sine-vol-ou", {GammaLaw{4.0, 1.0}, 0.5});
  SimConfig cfg = table1_config(0);
  cfg.fixed_jump_count.reset();
  double total = 0.0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    cfg.stream_id = static_cast<std::uint64_t>(r);
    total += static_cast<double>(simulate_path(m, cfg).jump_marks.size());
  }
  // mean 15, sd of the average sqrt(15/400)
  CHECK(std::fabs(total / reps - 15.0) < 4.0 * std::sqrt(15.0 / reps));
}

TEST_CASE("jumps leave the Brownian noise untouched") {
  // Additive noise and zero drift: the continuous part equals the jump-free path.
  auto m = with_jumps("const-ou", {GammaLaw{4.0, 1.0}, 1.0});
  SimConfig cfg;
  cfg.n = 300;
  cfg.h = 0.05;
  cfg.theta = {{2.0}, {0.0}};
  cfg.seed = 3;
  const auto jumpy = simulate_path(m, cfg);
  REQUIRE(!jumpy.jump_marks.empty());
  m.jump_law.intensity = 0.0;
  const auto plain = simulate_path(m, cfg);
  for (std::size_t j = 0; j <= cfg.n; ++j) {
    CHECK(jumpy.x_cont[j] == doctest::Approx(plain.x[j]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("simulation is deterministic") {
  const auto m = with_jumps("sine-vol-ou", {BilateralIGLaw{2.0, 1.0, 4.0, 1.0}, 0.5});
  const auto a = simulate_path(m, table1_config(4));
  const auto b = simulate_path(m, table1_config(4));
  CHECK(a.x == b.x);
  CHECK(a.x_cont == b.x_cont);
  CHECK(a.jump_counts == b.jump_counts);
  REQUIRE(a.jump_marks.size() == b.jump_marks.size());
  for (std::size_t i = 0; i < a.jump_marks.size(); ++i) {
    CHECK(a.jump_marks[i].time == b.jump_marks[i].time);
    CHECK(a.jump_marks[i].size == b.jump_marks[i].size);
  }
  CHECK(simulate_path(m, table1_config(5)).x != a.x);
}

TEST_CASE("refinement error shrinks on matched Brownian paths") {
  const auto m = builtin_model("sine-vol-ou");
  const ThetaTrue theta{{3.0}, {1.0}};
  const std::size_t n = 100;
  const double h = 0.03;
  const std::size_t fine = 64;
  std::vector<double> rms(4, 0.0);  // refine 2, 4, 8, 16
  const std::size_t paths = 200;
  for (std::size_t r = 0; r < paths; ++r) {
    RngStream rng(99, r);
    std::vector<double> dw(n * fine);
    const double sd = std::sqrt(h / fine);
    for (auto& v : dw) v = sd * sample_normal(rng);
    const auto ref = euler_path(m, theta, 0.0, h, fine, dw);
    for (std::size_t k = 0; k < rms.size(); ++k) {
      const std::size_t refine = std::size_t{2} << k;
      const std::size_t group = fine / refine;
      std::vector<double> coarse(n * refine, 0.0);
      for (std::size_t s = 0; s < dw.size(); ++s) coarse[s / group] += dw[s];
      const auto x = euler_path(m, theta, 0.0, h, refine, coarse);
      for (std::size_t j = 0; j <= n; ++j) rms[k] += (x[j] - ref[j]) * (x[j] - ref[j]);
    }
  }
  for (auto& v : rms) v = std::sqrt(v / static_cast<double>(paths * (n + 1)));
  for (std::size_t k = 1; k < rms.size(); ++k) {
    CHECK(rms[k] < rms[k - 1]);
  }
  // strong order one half: halving dt scales the error by about 1/sqrt(2)
  CHECK(rms[3] < 0.9 * rms[0]);
}

TEST_CASE("interval moments match the local Gaussian expansion") {
  SimConfig cfg;
  cfg.h = 0.001;
  cfg.refine = 10;
  SUBCASE("constant coefficients") {
    cfg.theta = {{1.0}, {0.0}};
    const auto r = interval_moment_check(builtin_model("const-ou"), cfg, 1000000);
    CHECK(r.a2 == 1.0);
    CHECK(std::fabs(r.second_ratio - 1.0) < 0.01);
    CHECK(std::fabs(r.fourth_ratio - 3.0) < 0.05);
    CHECK(r.second_se > 0.0);
  }
  SUBCASE("sine volatility") {
    cfg.x0 = 0.7;
    cfg.theta = {{3.0}, {1.0}};
    const auto r = interval_moment_check(builtin_model("sine-vol-ou"), cfg, 1000000);
    CHECK(std::fabs(r.second_ratio - 1.0) < 0.02);
    CHECK(std::fabs(r.fourth_ratio - 3.0) < 0.1);
  }
}

TEST_CASE("invalid configurations and divergence") {
  const auto m = builtin_model("const-ou");
  SimConfig cfg;
  cfg.theta = {{1.0}, {1.0}};
  cfg.n = 0;
  CHECK_THROWS_AS(simulate_path(m, cfg), InvalidArgument);
  cfg.n = 10;
  cfg.h = 0.0;
  CHECK_THROWS_AS(simulate_path(m, cfg), InvalidArgument);
  cfg.h = 0.01;
  cfg.refine = 0;
  CHECK_THROWS_AS(simulate_path(m, cfg), InvalidArgument);
  cfg.refine = 10;
  cfg.theta = {{-1.0}, {1.0}};
  CHECK_THROWS_AS(simulate_path(m, cfg), InvalidArgument);
  cfg.theta = {{1.0}, {1.0}};
  cfg.fixed_jump_count = 2;
  CHECK_THROWS_AS(simulate_path(m, cfg), InvalidArgument);  // law is 'none'
  cfg.fixed_jump_count.reset();

  cfg.x0 = 1.0;
  cfg.h = 1.0;
  cfg.n = 100;
  cfg.theta = {{1.0}, {-1e5}};
  CHECK_THROWS_AS(simulate_path(m, cfg), SimulationDiverged);
  const double dw[] = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(euler_path(m, cfg.theta, 0.0, 0.1, 2, dw), InvalidArgument);
}
