#pragma once

#include <stdexcept>
#include <string>

namespace repseg {

// Base of every error the library throws. Callers that only care about
// "something went wrong" can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidParam : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Configuration problems carry the file and the offending field so the CLI
// can print "config.json: levels.fine.tau: must be in [0,1]".
class ConfigError : public Error {
 public:
  ConfigError(std::string file, std::string field, const std::string& what)
      : Error(file + ": " + field + ": " + what),
        file_(std::move(file)),
        field_(std::move(field)) {}

  const std::string& file() const noexcept { return file_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::string field_;
};

}  // namespace repseg
