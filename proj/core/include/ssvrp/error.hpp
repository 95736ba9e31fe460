#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ssvrp {

// Bad combination of inputs or options (e.g. an uncapacitated strategy on a
// capacitated route).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solution references vertices that do not exist or are not waiting vertices.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(const std::string& what, std::vector<std::string> violations)
      : std::runtime_error(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Exhaustive procedures refuse to start when the space is too large.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double size)
      : std::runtime_error(what), size_(size) {}
  double size() const { return size_; }

 private:
  double size_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& msg)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace ssvrp
