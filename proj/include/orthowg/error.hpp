#ifndef ORTHOWG_ERROR_HPP
#define ORTHOWG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace orthowg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: mismatched ground sets, bad signs, wrong dimensions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured combinatorial cap would be exceeded.
class CapError : public Error {
 public:
  using Error::Error;
};

/// A rational function was evaluated at one of its poles.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::string factor, long long at)
      : Error(what), factor_(std::move(factor)), at_(at) {}

  const std::string& factor() const noexcept { return factor_; }
  long long at() const noexcept { return at_; }

 private:
  std::string factor_;
  long long at_;
};

/// A verification suite found a discrepancy.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace orthowg

#endif  // ORTHOWG_ERROR_HPP
