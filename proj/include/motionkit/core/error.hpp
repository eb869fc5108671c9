#pragma once

#include <stdexcept>
#include <string>

namespace motionkit {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Frames lack the channels an operation needs (e.g. FK without rotations).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Malformed input files; the message names the offending location.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Files that cannot be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A sub-metric failed inside evaluate_clip; carries the metric name.
class MetricError : public Error {
 public:
  MetricError(std::string metric, const std::string& what)
      : Error("metric '" + metric + "': " + what), metric_(std::move(metric)) {}
  const std::string& metric() const noexcept { return metric_; }

 private:
  std::string metric_;
};

}  // namespace motionkit
