#pragma once

#include <stdexcept>
#include <string>

namespace phoneboost {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input bytes or text do not follow the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input using a variant the toolkit does not handle (e.g. stereo WAV).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// Semantically invalid data: unknown labels, inverted segments, bad configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (missing file, unwritable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace phoneboost
