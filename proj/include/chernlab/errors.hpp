#pragma once

#include <stdexcept>
#include <string>

namespace chernlab {

/// Malformed input: bad JSON, bad expression syntax, out-of-range indices,
/// inconsistent duplicate metric entries. Line and column are 1-based; zero
/// means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0 && column <= 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

/// Evaluation hit a pole of the chart: division by zero or log of zero.
class ChartSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The metric matrix at a point is not positive definite (or is numerically
/// singular), so inverse metric, volume and Hodge star are undefined.
class SingularMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo or grid quadrature did not reach the requested precision.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chernlab
