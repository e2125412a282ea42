#pragma once

#include <stdexcept>
#include <string>

namespace sfcscan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument: bad shape, out-of-range parameter, mismatched sizes.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when two grids (or a grid and a sequence) disagree in size.
class ShapeMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Malformed or unsupported file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

/// File ended before the declared payload was read.
class TruncatedError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Filesystem failure (open, write, rename).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sfcscan
