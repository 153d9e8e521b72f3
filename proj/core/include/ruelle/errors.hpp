#pragma once

#include <stdexcept>
#include <string>

namespace ruelle {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// |det(I - P)| fell below the nondegeneracy threshold.
class NonHyperbolicOrbit : public Error {
 public:
  using Error::Error;
};

// No single parity beta makes (-1)^beta det(I - P) positive on every orbit.
class OrientabilityError : public Error {
 public:
  OrientabilityError(const std::string& what, std::string orbit_label)
      : Error(what), label_(std::move(orbit_label)) {}
  const std::string& orbit_label() const noexcept { return label_; }

 private:
  std::string label_;
};

// Evaluation requested at (or within the guard distance of) a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed a hard size or overflow limit.
class EnumerationLimit : public Error {
 public:
  using Error::Error;
};

// Contour quadrature failed its node-doubling consistency check.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace ruelle
