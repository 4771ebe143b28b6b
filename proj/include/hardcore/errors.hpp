#pragma once

#include <stdexcept>
#include <string>

namespace hardcore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside the mathematical domain (alpha >= 1/2, point outside R, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Computation would exceed a configured budget (nodes, atoms, enumeration size).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hardcore
