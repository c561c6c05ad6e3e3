#pragma once

#include <cstdint>

namespace jbjump {

/// Reproducible random stream keyed by (seed, stream_id).
///
/// The key is hashed through SplitMix64 into the 256-bit state of a
/// xoshiro256** engine. The same key gives the same sequence on every
/// platform; sub-streams are derived with split(), so replication r of a
/// Monte Carlo run never depends on how many draws replication r-1 used.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

  /// Independent child stream; split(k) depends only on (seed, stream_id, k).
  RngStream split(std::uint64_t k) const;

 private:
  friend double sample_normal(RngStream& rng);

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 output function applied to x.
std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

double sample_normal(RngStream& rng);

/// Gamma(shape, rate), mean shape/rate.
double sample_gamma(RngStream& rng, double shape, double rate);

/// IG(delta, gamma): mean delta/gamma, variance delta/gamma^3.
double sample_inverse_gaussian(RngStream& rng, double delta, double gamma);

/// IG(d1, g1) - IG(d2, g2) with independent components.
double sample_bilateral_ig(RngStream& rng, double d1, double g1, double d2,
                           double g2);

std::uint64_t sample_poisson_count(RngStream& rng, double mean);

/// x with P(chi2(2) > x) = q.
double chisq2_upper_quantile(double q);

/// x with P(chi2(1) > x) = q, by bisection on erfc(sqrt(x/2)).
double chisq1_upper_quantile(double q);

}  // namespace jbjump
