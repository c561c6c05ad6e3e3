#include "jbjump/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "jbjump/errors.hpp"

namespace jbjump {

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::add_outer(std::span<const double> v, double w) {
  for (std::size_t r = 0; r < d_; ++r) {
    const double wr = w * v[r];
    for (std::size_t c = 0; c < d_; ++c) a_[r * d_ + c] += wr * v[c];
  }
}

Matrix& Matrix::operator*=(double s) {
  for (auto& v : a_) v *= s;
  return *this;
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
  std::vector<double> out(d_, 0.0);
  for (std::size_t r = 0; r < d_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < d_; ++c) s += a_[r * d_ + c] * v[c];
    out[r] = s;
  }
  return out;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

double Matrix::norm1() const noexcept {
  double best = 0.0;
  for (std::size_t c = 0; c < d_; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < d_; ++r) s += std::fabs(a_[r * d_ + c]);
    best = std::max(best, s);
  }
  return best;
}

bool Matrix::is_symmetric(double tol) const noexcept {
  for (std::size_t r = 0; r < d_; ++r) {
    for (std::size_t c = r + 1; c < d_; ++c) {
      if (std::fabs(a_[r * d_ + c] - a_[c * d_ + r]) > tol) return false;
    }
  }
  return true;
}

namespace {

// Factorization that can solve for any number of right-hand sides.
class Factor {
 public:
  explicit Factor(const Matrix& m) : d_(m.dim()), lu_(m) {
    if (d_ == 0 || d_ > kMaxSolveDim) {
      throw InvalidArgument("solve_spd supports dimensions 1.." +
                            std::to_string(kMaxSolveDim));
    }
    tiny_ = 1e-12 * m.max_abs();
    if (!(m.max_abs() > 0.0) || !std::isfinite(m.max_abs())) {
      throw SingularNormalMatrix("normal matrix is zero or non-finite");
    }
    if (!cholesky(m)) {
      method_ = SolveMethod::Gauss;
      lu_ = m;
      gauss();
    }
  }

  SolveMethod method() const noexcept { return method_; }

  std::vector<double> solve(std::span<const double> rhs) const {
    std::vector<double> y(rhs.begin(), rhs.end());
    if (method_ == SolveMethod::Cholesky) {
      // L L^T y = rhs, L stored in the lower triangle.
      for (std::size_t i = 0; i < d_; ++i) {
        double s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * y[k];
        y[i] = s / lu_(i, i);
      }
      for (std::size_t i = d_; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < d_; ++k) s -= lu_(k, i) * y[k];
        y[i] = s / lu_(i, i);
      }
      return y;
    }
    for (std::size_t i = 0; i < d_; ++i) std::swap(y[i], y[perm_[i]]);
    for (std::size_t i = 0; i < d_; ++i) {
      double s = y[i];
      for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * y[k];
      y[i] = s;
    }
    for (std::size_t i = d_; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < d_; ++k) s -= lu_(i, k) * y[k];
      y[i] = s / lu_(i, i);
    }
    return y;
  }

  Matrix inverse() const {
    Matrix inv(d_);
    std::vector<double> e(d_, 0.0);
    for (std::size_t c = 0; c < d_; ++c) {
      std::fill(e.begin(), e.end(), 0.0);
      e[c] = 1.0;
      const auto col = solve(e);
      for (std::size_t r = 0; r < d_; ++r) inv(r, c) = col[r];
    }
    return inv;
  }

 private:
  bool cholesky(const Matrix& m) {
    for (std::size_t j = 0; j < d_; ++j) {
      double diag = m(j, j);
      for (std::size_t k = 0; k < j; ++k) diag -= lu_(j, k) * lu_(j, k);
      if (!(diag > tiny_)) return false;
      lu_(j, j) = std::sqrt(diag);
      for (std::size_t i = j + 1; i < d_; ++i) {
        double s = m(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= lu_(i, k) * lu_(j, k);
        lu_(i, j) = s / lu_(j, j);
      }
    }
    return true;
  }

  // Doolittle LU with partial pivoting, row swaps recorded in perm_.
  void gauss() {
    perm_.resize(d_);
    for (std::size_t k = 0; k < d_; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < d_; ++r) {
        if (std::fabs(lu_(r, k)) > std::fabs(lu_(piv, k))) piv = r;
      }
      perm_[k] = piv;
      if (!(std::fabs(lu_(piv, k)) >= tiny_) || lu_(piv, k) == 0.0) {
        throw SingularNormalMatrix(
            "normal matrix is singular to working precision (pivot " +
            std::to_string(k + 1) + "); basis functions may be collinear or "
            "too few intervals are retained");
      }
      if (piv != k) {
        for (std::size_t c = 0; c < d_; ++c) std::swap(lu_(k, c), lu_(piv, c));
      }
      for (std::size_t r = k + 1; r < d_; ++r) {
        lu_(r, k) /= lu_(k, k);
        for (std::size_t c = k + 1; c < d_; ++c) lu_(r, c) -= lu_(r, k) * lu_(k, c);
      }
    }
  }

  std::size_t d_;
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double tiny_ = 0.0;
  SolveMethod method_ = SolveMethod::Cholesky;
};

}  // namespace

SolveResult solve_spd(const Matrix& m, std::span<const double> rhs) {
  if (rhs.size() != m.dim()) {
    throw InvalidArgument("right-hand side dimension does not match the matrix");
  }
  const Factor f(m);
  SolveResult out;
  out.solution = f.solve(rhs);
  out.method = f.method();
  out.rcond = 1.0 / (m.norm1() * f.inverse().norm1());
  return out;
}

Matrix inverse_spd(const Matrix& m, double* rcond) {
  const Factor f(m);
  Matrix inv = f.inverse();
  if (rcond) *rcond = 1.0 / (m.norm1() * inv.norm1());
  return inv;
}

}  // namespace jbjump
