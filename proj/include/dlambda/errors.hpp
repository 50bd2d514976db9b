#pragma once

#include <stdexcept>
#include <string>

namespace dlambda {

/// Base class for every error raised by the library. The CLI maps the
/// subclasses onto process exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A configuration or argument violates a documented precondition.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A position outside the medium, or a profile point where the dark state
/// is undefined.
class DomainError : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

/// The numerical integration produced a non-finite value.
class DivergenceError : public Error
{
public:
  DivergenceError(const std::string& what, double z, double t)
    : Error(what), z_(z), t_(t)
  {
  }

  double z() const noexcept { return z_; }
  double t() const noexcept { return t_; }

private:
  double z_;
  double t_;
};

class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace dlambda
