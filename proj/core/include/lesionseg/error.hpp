#pragma once

#include <stdexcept>
#include <string>

namespace lesionseg {

/// Base class for every error raised by the toolkit. The message is a single
/// line suitable for printing on stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, malformed or unsupported file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Region or coordinate outside the image.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Invalid algorithm or command configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two images or masks that must share a shape do not.
class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

/// Input too degenerate for the requested operation (e.g. fewer distinct
/// intensities than clusters).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given masks (e.g. precision of an empty
/// prediction). Callers report the value as missing, never as zero.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Internal and external watershed markers cannot both be placed.
class MarkerConflictError : public Error {
 public:
  using Error::Error;
};

}  // namespace lesionseg
