#pragma once

#include <stdexcept>

namespace shs {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidEdgeError : Error { using Error::Error; };
struct InvalidPairError : Error { using Error::Error; };
struct InvalidKError : Error { using Error::Error; };
struct InvalidConfigError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace shs
