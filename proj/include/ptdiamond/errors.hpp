#pragma once

#include <stdexcept>
#include <string>

namespace ptdiamond {

/// Bad parameters or inputs, detected before any numerical work starts.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not deliver a trustworthy answer.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written; the message names the path.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The propagated state stopped being finite.
class IntegrationFailure : public NumericalError {
public:
  IntegrationFailure(const std::string& what, double last_good_z)
      : NumericalError(what), last_good_z_(last_good_z) {}

  double last_good_z() const noexcept { return last_good_z_; }

private:
  double last_good_z_;
};

}  // namespace ptdiamond
