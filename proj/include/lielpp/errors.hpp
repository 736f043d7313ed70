#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lielpp {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: wrong shapes, non-finite entries, out-of-range counts.
class InvalidInput : public Error {
public:
  using Error::Error;
};

// A scalar function was evaluated outside its domain (e.g. log of a
// nonpositive eigenvalue). Carries the offending value.
class DomainError : public Error {
public:
  DomainError(const std::string& msg, double offending)
      : Error(msg), offending_value(offending) {}
  double offending_value;
};

// Structurally valid input that the operation cannot make sense of
// (zero pencil mass, isolated graph node, ...).
class DegenerateInput : public Error {
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
  NotPositiveDefinite(const std::string& msg, double lambda_min_in)
      : Error(msg), lambda_min(lambda_min_in) {}
  double lambda_min;
};

// File ingestion failure; the message names the file and line.
class IngestError : public Error {
public:
  using Error::Error;
};

// A theorem's hypothesis does not hold for the given data.
class HypothesisNotMet : public Error {
public:
  HypothesisNotMet(const std::string& msg, std::size_t i_in, std::size_t j_in)
      : Error(msg), i(i_in), j(j_in) {}
  std::size_t i;
  std::size_t j;
};

}  // namespace lielpp
