#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwploc {

/// Base of every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : Error(format(path, line, what)), path_(std::move(path)), line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& path, std::size_t line,
                            const std::string& what) {
    std::string out = path.empty() ? std::string("<input>") : path;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + what;
  }

  std::string path_;
  std::size_t line_;
};

/// A value violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ExtractionError : public Error {
 public:
  using Error::Error;
};

/// More than one currency kind in one problem.
class MultiCurrencyError : public Error {
 public:
  using Error::Error;
};

/// A single currency kind that the language's entry does not cover.
class UnsupportedCurrencyError : public Error {
 public:
  using Error::Error;
};

/// Not enough replacement candidates to keep the per-record map injective.
class CandidateExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Network or provider failure after all retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Missing or rejected credentials; never retried.
class AuthError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// Scripted mock has no response for a request.
class MissingFixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace mwploc
