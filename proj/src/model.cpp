#include "jbjump/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "jbjump/errors.hpp"

namespace jbjump {

bool JumpLaw::fires() const noexcept {
  return intensity > 0.0 && !std::holds_alternative<NoJumpLaw>(kind);
}

std::string JumpLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* g = std::get_if<GammaLaw>(&kind)) {
    os << "gamma(shape=" << g->shape << ",rate=" << g->rate << ")";
  } else if (const auto* b = std::get_if<BilateralIGLaw>(&kind)) {
    os << "big(" << b->delta1 << "," << b->gamma1 << "," << b->delta2 << ","
       << b->gamma2 << ")";
  } else {
    os << "none";
  }
  os << " intensity=" << intensity;
  return os.str();
}

bool ParamBox::contains(std::span<const double> v) const noexcept {
  if (v.size() != lower.size() || v.size() != upper.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= lower[i] && v[i] <= upper[i])) return false;
  }
  return true;
}

Basis ModelSpec::eval_A(double x) const {
  Basis out{};
  A(x, std::span<double>(out.data(), p_alpha));
  return out;
}

Basis ModelSpec::eval_dA(double x) const {
  Basis out{};
  dA(x, std::span<double>(out.data(), p_alpha));
  return out;
}

Basis ModelSpec::eval_B(double x) const {
  Basis out{};
  B(x, std::span<double>(out.data(), p_beta));
  return out;
}

std::vector<double> ModelSpec::A_vec(double x) const {
  auto b = eval_A(x);
  return {b.begin(), b.begin() + static_cast<std::ptrdiff_t>(p_alpha)};
}

std::vector<double> ModelSpec::dA_vec(double x) const {
  auto b = eval_dA(x);
  return {b.begin(), b.begin() + static_cast<std::ptrdiff_t>(p_alpha)};
}

std::vector<double> ModelSpec::B_vec(double x) const {
  auto b = eval_B(x);
  return {b.begin(), b.begin() + static_cast<std::ptrdiff_t>(p_beta)};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelSpec sine_vol_ou() {
  ModelSpec m;
  m.name = "sine-vol-ou";
  m.A = [](double x, std::span<double> out) {
    const double s = std::sin(x);
    out[0] = 1.0 / (1.0 + s * s);
  };
  m.dA = [](double x, std::span<double> out) {
    const double s = std::sin(x);
    const double d = 1.0 + s * s;
    out[0] = -std::sin(2.0 * x) / (d * d);
  };
  m.B = [](double x, std::span<double> out) { out[0] = -x; };
  m.c = [](double) { return 1.0; };
  m.alpha_domain = {{std::numeric_limits<double>::min()}, {kInf}};
  return m;
}

ModelSpec const_ou() {
  ModelSpec m;
  m.name = "const-ou";
  m.A = [](double, std::span<double> out) { out[0] = 1.0; };
  m.dA = [](double, std::span<double> out) { out[0] = 0.0; };
  m.B = [](double x, std::span<double> out) { out[0] = -x; };
  m.c = [](double) { return 1.0; };
  m.alpha_domain = {{std::numeric_limits<double>::min()}, {kInf}};
  return m;
}

ModelSpec const_drift() {
  ModelSpec m = const_ou();
  m.name = "const-drift";
  m.B = [](double, std::span<double> out) { out[0] = 1.0; };
  return m;
}

struct Entry {
  const char* name;
  ModelSpec (*make)();
};

constexpr Entry kRegistry[] = {
    {"sine-vol-ou", sine_vol_ou},
    {"const-ou", const_ou},
    {"const-drift", const_drift},
};

}  // namespace

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& e : kRegistry) names.emplace_back(e.name);
  return names;
}

ModelSpec builtin_model(const std::string& name) {
  for (const auto& e : kRegistry) {
    if (name == e.name) return e.make();
  }
  std::string msg = "unknown model '" + name + "'; registered models:";
  for (const auto& e : kRegistry) msg += std::string(" ") + e.name;
  throw InvalidArgument(msg);
}

double eval_diffusion_sq(const ModelSpec& m, double x,
                         std::span<const double> alpha) {
  const double v = dot(m.eval_A(x), alpha);
  if (!(v > 0.0)) {
    throw NonPositiveDiffusion(x, {alpha.begin(), alpha.end()}, v);
  }
  return v;
}

void validate_theta(const ModelSpec& m, const ThetaTrue& theta) {
  if (theta.alpha0.size() != m.p_alpha) {
    throw InvalidArgument("alpha has dimension " +
                          std::to_string(theta.alpha0.size()) + ", model '" +
                          m.name + "' expects " + std::to_string(m.p_alpha));
  }
  if (theta.beta0.size() != m.p_beta) {
    throw InvalidArgument("beta has dimension " +
                          std::to_string(theta.beta0.size()) + ", model '" +
                          m.name + "' expects " + std::to_string(m.p_beta));
  }
  if (!m.alpha_domain.contains(theta.alpha0)) {
    throw InvalidArgument("alpha outside the admissible box of model '" +
                          m.name + "'");
  }
}

}  // namespace jbjump
