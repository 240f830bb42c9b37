#ifndef RAWSYNTH_ERRORS_HPP
#define RAWSYNTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rawsynth {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : Error {
  using Error::Error;
};
struct BadMagic : IoError {
  using IoError::IoError;
};
struct TruncatedFile : IoError {
  using IoError::IoError;
};
struct InvariantViolation : Error {
  using Error::Error;
};

struct QeOutOfRange : Error {
  using Error::Error;
};
struct NonPositiveGain : Error {
  using Error::Error;
};
struct InvalidLambda : Error {
  using Error::Error;
};

struct EmptyBank : Error {
  using Error::Error;
};
struct MixedGeometry : Error {
  using Error::Error;
};
struct UnknownGain : Error {
  using Error::Error;
};
struct EmptySubset : Error {
  using Error::Error;
};
struct BadCrop : Error {
  using Error::Error;
};
struct NTooLarge : Error {
  using Error::Error;
};
struct GeometryMismatch : Error {
  using Error::Error;
};

struct DegenerateSamples : Error {
  using Error::Error;
};
struct TooFewSamples : Error {
  using Error::Error;
};

struct TooFewLevels : Error {
  using Error::Error;
};
struct SaturatedRoi : Error {
  using Error::Error;
};
struct DegenerateFit : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rawsynth

#endif  // RAWSYNTH_ERRORS_HPP
