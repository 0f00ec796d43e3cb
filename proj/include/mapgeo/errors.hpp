#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapgeo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Identifier that is neither a declared coordinate nor a builtin.
class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(const std::string& name)
      : Error("unknown identifier '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside the domain of a subterm (log of non-positive,
/// division by zero, 0 raised to a negative power, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string term)
      : Error(message + " in term '" + term + "'"), term_(std::move(term)) {}
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

/// Metric not invertible at the requested point.
class SingularMetric : public Error {
 public:
  SingularMetric(std::vector<double> point, double abs_det)
      : Error("metric singular (|det| = " + std::to_string(abs_det) + ")"),
        point_(std::move(point)),
        abs_det_(abs_det) {}
  const std::vector<double>& point() const { return point_; }
  double abs_det() const { return abs_det_; }

 private:
  std::vector<double> point_;
  double abs_det_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class FrameNotUnit : public Error {
 public:
  using Error::Error;
};

class FrameNotNull : public Error {
 public:
  using Error::Error;
};

class NonPositiveWarp : public Error {
 public:
  explicit NonPositiveWarp(std::vector<double> point)
      : Error("warping function not positive at sampled point"),
        point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

class NotClosedFactor : public Error {
 public:
  using Error::Error;
};

class FormViolation : public Error {
 public:
  using Error::Error;
};

class FlowLeftDomain : public Error {
 public:
  using Error::Error;
};

class DimensionTooSmall : public Error {
 public:
  using Error::Error;
};

/// Input text is not syntactically well-formed; points at the failure line.
class ParseError : public Error {
 public:
  ParseError(const std::string& origin, int line)
      : Error("cannot parse " + origin + " at line " + std::to_string(line)),
        origin_(origin),
        line_(line) {}
  const std::string& origin() const { return origin_; }
  int line() const { return line_; }

 private:
  std::string origin_;
  int line_;
};

/// Scenario file failed structural validation; carries every problem found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "scenario validation failed:";
    for (const auto& s : issues) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace mapgeo
