#pragma once

#include <stdexcept>
#include <string>

namespace calmetrics {

// Broad failure categories; the CLI maps each one onto a distinct exit code.
enum class ErrorKind {
  kInvalidInput,   // malformed labels/scores, mismatched lengths
  kDegenerate,     // a class is empty where both are needed
  kInvalidConfig,  // bad prior, unknown metric, bad parameter
  kParse,          // positional input-file error
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what)
      : Error(ErrorKind::kDegenerate, what) {}
};

class InvalidConfigError : public Error {
 public:
  explicit InvalidConfigError(const std::string& what)
      : Error(ErrorKind::kInvalidConfig, what) {}
};

class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what)
      : Error(ErrorKind::kInvalidInput, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::kParse,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace calmetrics
