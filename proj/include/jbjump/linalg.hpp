#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jbjump {

/// Dense row-major square matrix for the small normal systems (d <= 16).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t d) : d_(d), a_(d * d, 0.0) {}

  static Matrix identity(std::size_t d);

  std::size_t dim() const noexcept { return d_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * d_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * d_ + c]; }

  /// this += w * v v^T
  void add_outer(std::span<const double> v, double w = 1.0);
  Matrix& operator*=(double s);

  std::vector<double> apply(std::span<const double> v) const;
  double max_abs() const noexcept;
  double norm1() const noexcept;
  bool is_symmetric(double tol = 0.0) const noexcept;

 private:
  std::size_t d_ = 0;
  std::vector<double> a_;
};

enum class SolveMethod { Cholesky, Gauss };

struct SolveResult {
  std::vector<double> solution;
  double rcond = 0.0;  ///< 1 / (||M||_1 ||M^-1||_1)
  SolveMethod method = SolveMethod::Cholesky;
};

inline constexpr std::size_t kMaxSolveDim = 16;

/// Solves M y = rhs for symmetric M by Cholesky, falling back to partially
/// pivoted Gaussian elimination when a Cholesky pivot is not positive.
/// Throws SingularNormalMatrix when a pivot drops below 1e-12 max|M|.
SolveResult solve_spd(const Matrix& m, std::span<const double> rhs);

/// Inverse of M through the same factorization; used for covariance blocks.
Matrix inverse_spd(const Matrix& m, double* rcond = nullptr);

}  // namespace jbjump
