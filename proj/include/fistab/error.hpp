#pragma once

#include <stdexcept>
#include <string>

namespace fistab {

// Every failure the library reports is one of these. The CLI maps them to
// exit codes: InputError -> 2, FeasibilityError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  DimensionMismatch(int degree, const std::string& what)
      : InputError("dimension mismatch at n=" + std::to_string(degree) + ": " + what),
        degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// A cross-check between two independent computations disagreed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class WindowExhausted : public Error {
 public:
  using Error::Error;
};

class NoFit : public Error {
 public:
  using Error::Error;
};

}  // namespace fistab
