#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgrs {

/// Bad configuration: unknown format tags, out-of-range parameters.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem or stream failure.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input row; carries the 1-based line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Violated API precondition.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Conditional probability requested against an item nobody consumed.
class undefined_conditional : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Group sampling exhausted its attempt budget without a qualifying group.
class no_homogeneous_group : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every candidate group item fell at or below the weight threshold.
class empty_profile_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Virtual profile too small to split or to calibrate against.
class degenerate_profile_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment finished without a single evaluable instance.
class run_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgrs
