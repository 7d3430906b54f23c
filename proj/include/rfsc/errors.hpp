#pragma once

#include <stdexcept>
#include <string>

namespace rfsc {

// Base class for library errors. Subclasses group into the CLI exit code
// classes: usage (2), data (3), network (4).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// data errors
struct TraceTooShort : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct InvalidBand : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct InsufficientShots : Error { using Error::Error; };
struct InvalidLevels : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct MalformedFrame : Error { using Error::Error; };

// network errors
struct NetError : Error { using Error::Error; };
struct ConnectionLost : NetError { using NetError::NetError; };

}  // namespace rfsc
