#pragma once

#include <stdexcept>
#include <string>

namespace exptest {

// Base of every error raised by the library. Callers that only care about
// "something was infeasible" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySupport : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

class ZeroProbabilitySignal : public Error {
 public:
  using Error::Error;
};

class InfinitePotential : public Error {
 public:
  using Error::Error;
};

class InfeasibleBarycenter : public Error {
 public:
  using Error::Error;
};

class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

class NoFeasibleU : public Error {
 public:
  using Error::Error;
};

class BoundaryPrior : public Error {
 public:
  using Error::Error;
};

}  // namespace exptest
