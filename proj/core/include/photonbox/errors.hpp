#pragma once

#include <stdexcept>
#include <string>

namespace photonbox {

/// Invalid or inconsistent configuration input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An integrator or estimator failed to meet its accuracy or domain
/// contract. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace photonbox
