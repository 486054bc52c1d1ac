#pragma once

#include <stdexcept>
#include <string>

namespace reviewkit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input data (detection files, annotations, records, manifests).
/// The message carries the source name and line number when known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
  ParseError(const std::string& source, int line, const std::string& msg)
      : Error(source + ":" + std::to_string(line) + ": " + msg),
        source_name(source),
        line_number(line) {}

  std::string source_name;
  int line_number = 0;
};

/// A pluggable backend (detector, recognizer, analyzer) failed.
struct BackendError : Error {
  explicit BackendError(const std::string& msg) : Error(msg) {}
  BackendError(const std::string& image_id, const std::string& msg)
      : Error(image_id + ": " + msg), image(image_id) {}

  std::string image;
};

/// Invalid or inconsistent pipeline configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Crop rectangle collapsed to zero width or height after clamping.
struct DegenerateCropError : Error {
  using Error::Error;
};

/// A veracity policy axis is enabled but the required flag was never computed.
struct MissingFlagError : Error {
  using Error::Error;
};

}  // namespace reviewkit
