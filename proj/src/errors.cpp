#include "jbjump/errors.hpp"

#include <sstream>

namespace jbjump {

namespace {

std::string describe_diffusion(double x, const std::vector<double>& alpha,
                               double value, std::ptrdiff_t index) {
  std::ostringstream os;
  os.precision(17);
  os << "non-positive squared diffusion " << value << " at x=" << x
     << " for alpha=(";
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    os << (i ? "," : "") << alpha[i];
  }
  os << ")";
  if (index >= 0) os << " (interval " << index + 1 << ")";
  return os.str();
}

}  // namespace

NonPositiveDiffusion::NonPositiveDiffusion(double x, std::vector<double> alpha,
                                           double value, std::ptrdiff_t index)
    : Error(describe_diffusion(x, alpha, value, index)),
      x_(x),
      alpha_(std::move(alpha)),
      value_(value),
      index_(index) {}

SimulationDiverged::SimulationDiverged(std::size_t step)
    : Error("simulation diverged: non-finite state at fine step " +
            std::to_string(step)),
      step_(step) {}

MalformedRow::MalformedRow(std::size_t line, const std::string& what)
    : Error("malformed row at line " + std::to_string(line) + ": " + what),
      line_(line) {}

}  // namespace jbjump
