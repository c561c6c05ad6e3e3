#include "jbjump/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "jbjump/errors.hpp"

namespace jbjump {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

double gamma_unit_rate(RngStream& rng, double shape) {
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double g = gamma_unit_rate(rng, shape + 1.0);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  // Marsaglia & Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z;
    double v;
    do {
      z = sample_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t poisson_small(RngStream& rng, double mean) {
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = rng.uniform();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

// Hoermann's transformed rejection with squeeze (PTRS), mean >= 10.
std::uint64_t poisson_ptrs(RngStream& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t key = splitmix64_mix(seed + kGolden) ^
                      splitmix64_mix(stream_id * kGolden + 0x632be59bd9b4e019ULL);
  for (auto& w : s_) {
    key += kGolden;
    w = splitmix64_mix(key);
  }
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

RngStream RngStream::split(std::uint64_t k) const {
  const std::uint64_t child_seed =
      splitmix64_mix(seed_ ^ splitmix64_mix(stream_id_ + kGolden));
  return RngStream(child_seed, splitmix64_mix(k + 0x2545f4914f6cdd1dULL));
}

double sample_normal(RngStream& rng) {
  if (rng.has_cached_normal_) {
    rng.has_cached_normal_ = false;
    return rng.cached_normal_;
  }
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  rng.cached_normal_ = r * std::sin(phi);
  rng.has_cached_normal_ = true;
  return r * std::cos(phi);
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  check_positive(shape, "gamma shape");
  check_positive(rate, "gamma rate");
  return gamma_unit_rate(rng, shape) / rate;
}

double sample_inverse_gaussian(RngStream& rng, double delta, double gamma) {
  check_positive(delta, "IG delta");
  check_positive(gamma, "IG gamma");
  // Michael, Schucany & Haas with mean mu = delta/gamma, shape lambda = delta^2.
  const double mu = delta / gamma;
  const double lambda = delta * delta;
  const double z = sample_normal(rng);
  const double y = z * z;
  const double muy = mu * y;
  const double x = mu + mu * muy / (2.0 * lambda) -
                   mu / (2.0 * lambda) *
                       std::sqrt(4.0 * lambda * muy + muy * muy);
  const double u = rng.uniform();
  if (u <= mu / (mu + x)) return x;
  return mu * mu / x;
}

double sample_bilateral_ig(RngStream& rng, double d1, double g1, double d2,
                           double g2) {
  const double x1 = sample_inverse_gaussian(rng, d1, g1);
  const double x2 = sample_inverse_gaussian(rng, d2, g2);
  return x1 - x2;
}

std::uint64_t sample_poisson_count(RngStream& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw InvalidArgument("Poisson mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_small(rng, mean);
  return poisson_ptrs(rng, mean);
}

double chisq2_upper_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidArgument("significance level q must lie in (0, 1)");
  }
  return -2.0 * std::log(q);
}

double chisq1_upper_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidArgument("significance level q must lie in (0, 1)");
  }
  auto survival = [](double x) { return std::erfc(std::sqrt(0.5 * x)); };
  double lo = 0.0;
  double hi = 1.0;
  while (survival(hi) > q) hi *= 2.0;
  // Bisect down to adjacent doubles; well inside the 1e-10 target.
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (survival(mid) > q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace jbjump
