#pragma once

#include <stdexcept>
#include <string>

namespace elscat {

/// Base class for every failure reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define ELSCAT_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  }

ELSCAT_DEFINE_ERROR(DegenerateModuli);
ELSCAT_DEFINE_ERROR(AsymmetricInput);
ELSCAT_DEFINE_ERROR(SingularPoint);
ELSCAT_DEFINE_ERROR(SingularContrast);
ELSCAT_DEFINE_ERROR(NotInvertible);
ELSCAT_DEFINE_ERROR(ZeroTensorContrast);
ELSCAT_DEFINE_ERROR(NoConvergence);
ELSCAT_DEFINE_ERROR(SingularSystem);
ELSCAT_DEFINE_ERROR(ShapeMismatch);
ELSCAT_DEFINE_ERROR(ConfigError);

#undef ELSCAT_DEFINE_ERROR

}  // namespace elscat
