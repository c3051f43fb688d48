#pragma once

#include <stdexcept>
#include <string>

namespace cicg {

//! Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define CICG_DEFINE_ERROR(Name)                                                \
  class Name : public Error                                                    \
  {                                                                            \
  public:                                                                      \
    using Error::Error;                                                        \
  }

CICG_DEFINE_ERROR(DimensionMismatch);
CICG_DEFINE_ERROR(NotPositiveDefinite);
CICG_DEFINE_ERROR(InvalidParameter);
CICG_DEFINE_ERROR(EmptyInput);
CICG_DEFINE_ERROR(TooFewSamples);
CICG_DEFINE_ERROR(NonFiniteModelOutput);
CICG_DEFINE_ERROR(NonFiniteGradient);
CICG_DEFINE_ERROR(SingularRadial);
CICG_DEFINE_ERROR(ZeroPreviousGradient);
CICG_DEFINE_ERROR(IoError);
CICG_DEFINE_ERROR(ConfigError);

#undef CICG_DEFINE_ERROR

} // namespace cicg
