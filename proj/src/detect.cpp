#include "jbjump/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jbjump/errors.hpp"

namespace jbjump {

DetectionState detect(const ModelSpec& m, std::span<const double> x, double h,
                      const DetectOptions& opts) {
  if (x.size() < 11) throw InvalidArgument("detection needs n >= 10 intervals");
  if (!(opts.q > 0.0 && opts.q < 1.0)) {
    throw InvalidArgument("q must lie in (0, 1)");
  }
  if (opts.batch < 1) throw InvalidArgument("batch must be >= 1");
  const std::size_t n = x.size() - 1;
  const std::size_t k_max = std::min(opts.k_max.value_or(n / 2), n - 5);

  // Removal order is fixed up front: the next removal is always the first
  // not-yet-removed entry, which is the retained argmax of |dX|.
  std::vector<double> abs_dx(n);
  for (std::size_t i = 0; i < n; ++i) abs_dx[i] = std::fabs(x[i + 1] - x[i]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return abs_dx[a] > abs_dx[b];
  });

  DetectionState st;
  st.n = n;
  st.retained = RetainedSet::all(n);
  for (;;) {
    EstimateReport rep = estimate(m, x, h, st.retained);
    const auto& alpha_jb =
        opts.jb_alpha == JbAlpha::OneStep ? rep.alpha_onestep : rep.alpha_lse;
    const JbResult res =
        jb_test(jb_statistic(m, x, h, alpha_jb, st.retained, opts.parts), opts.q);
    st.jb_trace.push_back(res);
    st.final_report = std::move(rep);
    if (!res.reject) break;
    if (st.removed.size() >= k_max) {
      st.exhausted = true;
      break;
    }
    const std::size_t take = std::min(opts.batch, k_max - st.removed.size());
    for (std::size_t t = 0; t < take; ++t) {
      const std::size_t j = order[st.removed.size()];
      st.retained.remove(j);
      st.removed.push_back(j);
    }
  }
  st.k_star = st.removed.size();
  if (st.k_star > 0) st.threshold_r = abs_dx[st.removed.back()];
  return st;
}

DetectionState detect_batched(const ModelSpec& m, std::span<const double> x,
                              double h, DetectOptions opts, std::size_t batch) {
  opts.batch = batch;
  return detect(m, x, h, opts);
}

Classification classify(const DetectionState& state, std::size_t n) {
  const RetainedSet kept = RetainedSet::all_except(n, state.removed);
  return {kept.removed(), kept.indices()};
}

std::optional<double> detection_recall(const DetectionState& state,
                                       std::span<const std::size_t> jump_counts) {
  std::size_t truth = 0;
  std::size_t hit = 0;
  const RetainedSet kept = RetainedSet::all_except(jump_counts.size(), state.removed);
  for (std::size_t i = 0; i < jump_counts.size(); ++i) {
    if (jump_counts[i] == 0) continue;
    ++truth;
    if (!kept.contains(i)) ++hit;
  }
  if (truth == 0) return std::nullopt;
  return static_cast<double>(hit) / static_cast<double>(truth);
}

}  // namespace jbjump
