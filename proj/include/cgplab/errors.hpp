#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgplab {

/// Malformed input text (genotype files, truth tables, run records).
/// `line` is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}
  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Raw genes that do not describe a valid circuit.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment / algorithm configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an evaluation is requested after the budget is spent.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// A statistic that has no defined value for the given data
/// (e.g. rank correlation of a constant sequence).
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Filesystem failures; the message always names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgplab
