#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "jbjump/errors.hpp"
#include "jbjump/residuals.hpp"

using namespace jbjump;

namespace {

std::vector<double> ramp(std::size_t n, double step) {
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = step * static_cast<double>(i);
  return x;
}

std::vector<double> random_eps(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::student_t_distribution<double> t(5.0);
  std::vector<double> v(n);
  for (auto& e : v) e = t(gen);
  return v;
}

}  // namespace

TEST_CASE("constant-basis residuals") {
  const auto m = builtin_model("const-ou");
  const auto x = ramp(8, 0.1);
  const double a1[] = {1.0};
  const double a4[] = {4.0};
  for (double e : euler_residuals(m, x, 0.01, a1)) CHECK(e == doctest::Approx(1.0).epsilon(1e-14));
  for (double e : euler_residuals(m, x, 0.01, a4)) CHECK(e == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(euler_residuals(m, x, 0.01, a1).size() == 8);
}

TEST_CASE("sine-vol residual at pi/2") {
  const auto m = builtin_model("sine-vol-ou");
  const double x[] = {std::numbers::pi / 2, std::numbers::pi / 2 + 0.1};
  const double a[] = {3.0};
  const auto eps = euler_residuals(m, x, 0.03, a);
  REQUIRE(eps.size() == 1);
  CHECK(eps[0] == doctest::Approx(0.4714045207910316829).epsilon(1e-14));
}

TEST_CASE("drift-corrected residuals subtract h b(x)") {
  const auto m = builtin_model("const-ou");
  const double x[] = {2.0, 2.5};
  const double a[] = {1.0};
  ResidualOptions opts;
  opts.drift_corrected = true;
  opts.beta = {1.0};
  const auto eps = euler_residuals(m, x, 0.25, a, opts);
  CHECK(eps[0] == doctest::Approx((0.5 + 0.25 * 2.0) / 0.5).epsilon(1e-14));
}

TEST_CASE("non-positive diffusion reports the interval") {
  const auto m = builtin_model("const-ou");
  const double x[] = {0.0, 0.1, 0.2};
  const double a[] = {-1.0};
  try {
    euler_residuals(m, x, 0.01, a);
    FAIL("expected NonPositiveDiffusion");
  } catch (const NonPositiveDiffusion& e) {
    CHECK(e.index() == 0);
  }
}

TEST_CASE("normalize examples") {
  CHECK_THROWS_AS(normalize({1, 1, 1, 1}, RetainedSet::all(4)), DegenerateVariance);

  const auto two = normalize({-1.0, 1.0}, RetainedSet::all(2));
  CHECK(two.mean == 0.0);
  CHECK(two.var == 1.0);
  CHECK(two.normalized == std::vector<double>{-1.0, 1.0});

  const std::size_t keep[] = {0, 1, 2};
  const auto r = normalize({0.0, 1.0, 2.0, 100.0}, RetainedSet::only(4, keep));
  CHECK(r.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.var == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.normalized[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
  CHECK(std::fabs(r.normalized[1]) < 1e-15);
  CHECK(r.normalized[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(std::isnan(r.normalized[3]));

  const std::size_t one[] = {2};
  CHECK_THROWS_AS(normalize({0.0, 1.0, 2.0}, RetainedSet::only(3, one)), InvalidArgument);
  CHECK_THROWS_AS(normalize({0.0, 1.0}, RetainedSet::all(3)), InvalidArgument);
}

TEST_CASE("normalized residuals have mean 0 and mean square 1") {
  for (unsigned seed = 0; seed < 50; ++seed) {
    const auto eps = random_eps(200 + seed, seed);
    auto keep = RetainedSet::all(eps.size());
    for (std::size_t i = 0; i < eps.size(); i += 7 + seed % 5) keep.remove(i);
    const auto r = normalize(eps, keep);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i : keep.indices()) {
      s1 += r.normalized[i];
      s2 += r.normalized[i] * r.normalized[i];
    }
    const double m = static_cast<double>(keep.size());
    CHECK(std::fabs(s1 / m) <= 1e-10);
    CHECK(std::fabs(s2 / m - 1.0) <= 1e-10);
  }
}

TEST_CASE("scaling alpha rescales residuals and leaves normalization fixed") {
  const auto m = builtin_model("const-ou");
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd(0.0, 0.1);
  std::vector<double> x(101, 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = x[i - 1] + nd(gen);
  const double a[] = {1.7};
  const auto keep = RetainedSet::all(100);
  const auto base = euler_residuals(m, x, 0.01, a);
  const auto nb = normalize(base, keep);
  for (double c : {0.25, 3.0, 40.0}) {
    const double ac[] = {1.7 * c};
    const auto scaled = euler_residuals(m, x, 0.01, ac);
    const auto ns = normalize(scaled, keep);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(scaled[i] == doctest::Approx(base[i] / std::sqrt(c)).epsilon(1e-12));
      CHECK(ns.normalized[i] == doctest::Approx(nb.normalized[i]).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("removing then renormalizing equals normalizing the subset") {
  const auto eps = random_eps(60, 17);
  auto keep = RetainedSet::all(60);
  keep.remove(4);
  keep.remove(31);
  const auto a = normalize(eps, keep);
  const auto idx = keep.indices();
  const auto b = normalize(eps, RetainedSet::only(60, idx));
  CHECK(a.mean == b.mean);
  CHECK(a.var == b.var);
  for (std::size_t i : idx) CHECK(a.normalized[i] == b.normalized[i]);
  CHECK(std::isnan(a.normalized[4]));
}

TEST_CASE("retained set bookkeeping") {
  auto s = RetainedSet::all(5);
  CHECK(s.size() == 5);
  CHECK(s.remove(3));
  CHECK_FALSE(s.remove(3));
  CHECK(s.removed() == std::vector<std::size_t>{3});
  CHECK(s.indices() == std::vector<std::size_t>{0, 1, 2, 4});
  const std::size_t rm[] = {3};
  CHECK(s == RetainedSet::all_except(5, rm));
  const std::size_t dup[] = {1, 1};
  CHECK_THROWS_AS(RetainedSet::all_except(5, dup), InvalidArgument);
  const std::size_t out[] = {5};
  CHECK_THROWS_AS(RetainedSet::only(5, out), InvalidArgument);
}
