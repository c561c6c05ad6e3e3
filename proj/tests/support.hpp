// Test-only oracles: golden-section search, adaptive quadrature and the
// Kolmogorov-Smirnov machinery. Nothing here calls into the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace jbjump::testing {

/// Minimizes a unimodal f; the bracket is grown from [lo, hi] until it
/// contains a local minimum. T = long double resolves flat objectives.
template <class T = double>
T golden_section_min(const std::function<T(T)>& f, T lo, T hi, T tol = T(1e-15)) {
  // Expand to the right until f turns upward.
  T mid = (lo + hi) / 2;
  while (f(hi) < f(mid)) {
    lo = mid;
    mid = hi;
    hi = 2 * hi - lo + 1;
  }
  const T invphi = (std::sqrt(T(5)) - 1) / 2;
  T a = lo;
  T b = hi;
  T c = b - invphi * (b - a);
  T d = a + invphi * (b - a);
  T fc = f(c);
  T fd = f(d);
  while (b - a > tol * std::max(T(1), std::fabs(a) + std::fabs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double whole, double eps,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-10) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, eps, 40);
}

/// Tabulates the CDF of a density on a grid by cumulative quadrature and
/// returns a linear interpolant.
class TabulatedCdf {
 public:
  TabulatedCdf(const std::function<double(double)>& pdf, double lo, double hi,
               std::size_t cells)
      : lo_(lo), step_((hi - lo) / static_cast<double>(cells)), cdf_(cells + 1, 0.0) {
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = lo_ + step_ * static_cast<double>(i);
      cdf_[i + 1] = cdf_[i] + integrate(pdf, a, a + step_, 1e-13);
    }
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    const double pos = (x - lo_) / step_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= cdf_.size()) return cdf_.back();
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * cdf_[i] + w * cdf_[i + 1];
  }

 private:
  double lo_;
  double step_;
  std::vector<double> cdf_;
};

/// Two-sided one-sample KS distance sup |F_n - F|.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return d;
}

/// Asymptotic KS p-value with Stephens' small-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

inline double gamma_pdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                  std::lgamma(shape));
}

/// IG(delta, gamma) density delta e^{delta gamma} / sqrt(2 pi) x^{-3/2}
/// exp(-(delta^2/x + gamma^2 x)/2).
inline double ig_pdf(double x, double delta, double gamma) {
  if (x <= 0.0) return 0.0;
  return delta / std::sqrt(2.0 * std::numbers::pi) *
         std::exp(delta * gamma - 1.5 * std::log(x) -
                  0.5 * (delta * delta / x + gamma * gamma * x));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(v.size() - 1)};
}

}  // namespace jbjump::testing
