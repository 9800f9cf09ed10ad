#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bellopt {

class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The simplex iteration guard was exceeded.
class SolverStall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The search objective returned a non-finite value.
class SearchAbort : public std::runtime_error {
 public:
  SearchAbort(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

// A result failed its certificate (LHV residual or stored-value check).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bellopt
