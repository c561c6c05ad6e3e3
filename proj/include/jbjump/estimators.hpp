#pragma once

#include <optional>
#include <span>
#include <vector>

#include "jbjump/linalg.hpp"
#include "jbjump/model.hpp"
#include "jbjump/retained.hpp"
#include "jbjump/simulate.hpp"

namespace jbjump {

/// Solution of one normal system with its reciprocal condition estimate.
struct Estimate {
  std::vector<double> value;
  double rcond = 0.0;
};

/// Observations entering the estimators: the state at the left end of each
/// interval and the increment over it. Observed data use states x[0..n-1]
/// and increments diff(x); the continuous-part oracle swaps in diff(x_cont).
struct IncrementView {
  std::span<const double> state;
  std::span<const double> dx;

  static std::vector<double> diff(std::span<const double> x);
};

/// Trimmed least squares for alpha:
/// (1/h) (sum A A^T)^{-1} sum (dX)^2 A over retained intervals.
Estimate alpha_lse(const ModelSpec& m, std::span<const double> x, double h,
                   const RetainedSet& retained);
Estimate alpha_lse(const ModelSpec& m, IncrementView obs, double h,
                   const RetainedSet& retained);

/// One Gaussian quasi-likelihood scoring step from alpha_init.
Estimate alpha_onestep(const ModelSpec& m, std::span<const double> x, double h,
                       const RetainedSet& retained,
                       std::span<const double> alpha_init);
Estimate alpha_onestep(const ModelSpec& m, IncrementView obs, double h,
                       const RetainedSet& retained,
                       std::span<const double> alpha_init);

/// Weighted least squares for beta with weights 1/(A^T alpha_hat).
Estimate beta_plugin(const ModelSpec& m, std::span<const double> x, double h,
                     const RetainedSet& retained,
                     std::span<const double> alpha_hat);
Estimate beta_plugin(const ModelSpec& m, IncrementView obs, double h,
                     const RetainedSet& retained,
                     std::span<const double> alpha_hat);

/// Quasi-score of the stepwise GQL for alpha:
/// sum (1/(A^T a) - (dX)^2 / (h (A^T a)^2)) A.
std::vector<double> gql_alpha_score(const ModelSpec& m, IncrementView obs,
                                    double h, const RetainedSet& retained,
                                    std::span<const double> alpha);

struct Sigma0 {
  Matrix alpha;  ///< asymptotic covariance of sqrt(n)(alpha_hat - alpha0)
  Matrix beta;   ///< asymptotic covariance of sqrt(T)(beta_hat - beta0)
};

/// Plug-in asymptotic covariance with empirical averages over the retained
/// states in place of integrals against the invariant law.
Sigma0 sigma0_plugin(const ModelSpec& m, std::span<const double> x, double h,
                     const RetainedSet& retained,
                     std::span<const double> alpha_hat);

struct EstimateReport {
  std::vector<double> alpha_lse;
  std::vector<double> alpha_onestep;
  std::vector<double> beta;
  Matrix sigma_alpha;
  Matrix sigma_beta;
  std::size_t retained_count = 0;
  double rcond_lse = 0.0;
  double rcond_onestep = 0.0;
  double rcond_beta = 0.0;
};

/// LSE -> one-step -> plug-in drift -> plug-in covariance on one retained set.
EstimateReport estimate(const ModelSpec& m, std::span<const double> x, double h,
                        const RetainedSet& retained);

/// Same pipeline on an arbitrary increment view. When alpha_init is given it
/// replaces the LSE as the starting point of the scoring step.
EstimateReport estimate(const ModelSpec& m, IncrementView obs, double h,
                        const RetainedSet& retained,
                        std::optional<std::vector<double>> alpha_init = std::nullopt);

struct OracleReport {
  /// One-step and drift estimators on the increments of X^cont, all intervals.
  EstimateReport cont;
  /// Standard pipeline on observed X over intervals with no true jump.
  EstimateReport true_no_jump;
  RetainedSet no_jump_set;
};

/// Infeasible benchmark estimators that use the simulation ground truth.
/// alpha_init defaults to the LSE computed from the X^cont increments.
OracleReport oracle_estimates(const ModelSpec& m, const SamplePath& path,
                              std::optional<std::vector<double>> alpha_init = std::nullopt);

}  // namespace jbjump
