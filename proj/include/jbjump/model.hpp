#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jbjump {

/// Upper bound on p_alpha and p_beta; keeps basis evaluations on the stack.
inline constexpr std::size_t kMaxBasis = 16;

using Basis = std::array<double, kMaxBasis>;

/// Writes the first p entries of a basis vector evaluated at x.
using BasisFn = std::function<void(double x, std::span<double> out)>;

struct GammaLaw {
  double shape = 1.0;
  double rate = 1.0;
};

/// Difference X1 - X2 of independent IG(delta1, gamma1) and IG(delta2, gamma2).
/// IG(delta, gamma) has mean delta/gamma and variance delta/gamma^3.
struct BilateralIGLaw {
  double delta1 = 1.0;
  double gamma1 = 1.0;
  double delta2 = 1.0;
  double gamma2 = 1.0;
};

struct NoJumpLaw {};

/// Compound Poisson driver: size law plus intensity per unit time.
/// Zero intensity never fires regardless of the size law.
struct JumpLaw {
  std::variant<NoJumpLaw, GammaLaw, BilateralIGLaw> kind;
  double intensity = 0.0;

  bool fires() const noexcept;
  std::string describe() const;
};

/// Axis-aligned box of admissible alpha.
struct ParamBox {
  std::vector<double> lower;
  std::vector<double> upper;

  bool contains(std::span<const double> v) const noexcept;
};

/// dX = sqrt(A(X)^T alpha) dw + B(X)^T beta dt + c(X-) dJ.
struct ModelSpec {
  std::string name;
  std::size_t p_alpha = 1;
  std::size_t p_beta = 1;
  BasisFn A;
  BasisFn dA;
  BasisFn B;
  std::function<double(double)> c;
  ParamBox alpha_domain;
  JumpLaw jump_law;

  Basis eval_A(double x) const;
  Basis eval_dA(double x) const;
  Basis eval_B(double x) const;

  std::vector<double> A_vec(double x) const;
  std::vector<double> dA_vec(double x) const;
  std::vector<double> B_vec(double x) const;
};

struct ThetaTrue {
  std::vector<double> alpha0;
  std::vector<double> beta0;
};

/// Registered model names, in registry order.
std::vector<std::string> builtin_model_names();

/// Looks up a built-in model:
///  - "sine-vol-ou": A(x) = 1/(1+sin^2 x), B(x) = -x, c = 1
///  - "const-ou":    A(x) = 1,             B(x) = -x, c = 1
///  - "const-drift": A(x) = 1,             B(x) = 1,  c = 1
/// Throws InvalidArgument listing the registry for unknown names.
ModelSpec builtin_model(const std::string& name);

/// A(x)^T alpha; throws NonPositiveDiffusion when the result is not > 0.
double eval_diffusion_sq(const ModelSpec& m, double x,
                         std::span<const double> alpha);

/// Inner product over the first p entries.
inline double dot(const Basis& v, std::span<const double> w) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += v[i] * w[i];
  return s;
}

/// Checks model/parameter dimensions and the alpha box; throws InvalidArgument.
void validate_theta(const ModelSpec& m, const ThetaTrue& theta);

}  // namespace jbjump
