#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jbjump {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A(x)^T alpha <= 0 at some evaluation point.
class NonPositiveDiffusion : public Error {
 public:
  NonPositiveDiffusion(double x, std::vector<double> alpha, double value,
                       std::ptrdiff_t index = -1);

  double x() const noexcept { return x_; }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double value() const noexcept { return value_; }
  /// Interval index (0-based) when raised from a path computation, else -1.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  double x_;
  std::vector<double> alpha_;
  double value_;
  std::ptrdiff_t index_;
};

class SimulationDiverged : public Error {
 public:
  explicit SimulationDiverged(std::size_t step);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class DegenerateVariance : public Error {
 public:
  using Error::Error;
};

class SingularNormalMatrix : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonUniformGrid : public Error {
 public:
  using Error::Error;
};

class MalformedRow : public Error {
 public:
  MalformedRow(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace jbjump
