#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mediapulse {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input document. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line > 0 ? message + " (line " + std::to_string(line) + ")" : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A lexicon assigns the same normalized alias to two different entities.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

// An input document is well-formed but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Body is not a recognized feed document.
class FeedFormatError : public Error {
 public:
  using Error::Error;
};

// Typed fetch failure. Never aborts a whole crawl; callers record and move on.
class FetchError : public Error {
 public:
  enum class Kind { connect, timeout, http_status, too_large, content_type, not_in_fixtures };

  FetchError(Kind kind, const std::string& url, int attempts, const std::string& detail)
      : Error(detail + " [url=" + url + " attempts=" + std::to_string(attempts) + "]"),
        kind_(kind),
        url_(url),
        attempts_(attempts) {}

  Kind kind() const { return kind_; }
  const std::string& url() const { return url_; }
  int attempts() const { return attempts_; }

 private:
  Kind kind_;
  std::string url_;
  int attempts_;
};

// Persistence failure in the record store.
class StoreError : public Error {
 public:
  using Error::Error;
};

// A mention record references an article URL the store has never seen.
class ReferentialError : public Error {
 public:
  using Error::Error;
};

// Bad argument to a query or metric operation (inverted range, missing date...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Records from more than one lexicon version reached a single-version operation.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Poll and seat fixtures do not cover the same party ids.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Unusable run configuration. Maps to the usage exit code in the CLI.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mediapulse
