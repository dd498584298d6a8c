#pragma once

#include <stdexcept>
#include <string>

namespace mvpde {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the valid domain of a potential or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Violated precondition on a parameter (sizes, signs, sample counts).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

// The quantity being normalized by vanishes (e.g. ||u|| = 0).
class DegenerateFieldError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

class NotReachedError : public Error {
 public:
  using Error::Error;
};

// Per-frame failure while assembling a path; carries the frame time.
class PathError : public Error {
 public:
  PathError(double t, const std::string& what)
      : Error("at t=" + std::to_string(t) + ": " + what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvpde
