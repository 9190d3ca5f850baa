#pragma once

#include <stdexcept>
#include <string>

namespace momrl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WrongModeError : Error {
  using Error::Error;
};

struct InvalidLevelError : Error {
  using Error::Error;
};

struct EnumerationCapError : Error {
  using Error::Error;
};

struct PreimageError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct SamplingError : Error {
  using Error::Error;
};

struct InsufficientSamplesError : Error {
  using Error::Error;
};

}  // namespace momrl
