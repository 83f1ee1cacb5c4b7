#pragma once

#include <stdexcept>
#include <string>

namespace chanmatch {

// Malformed arguments: size mismatches, out-of-range vertices, bad grids.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the domain of a formula (log of 0, beta > 1, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Enumeration budgets and sampler retry budgets.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chanmatch
