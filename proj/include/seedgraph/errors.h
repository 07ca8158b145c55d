#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seedgraph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing run configuration. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data. CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Graph search cannot start (e.g. seed missing from the embedding table). CLI exit code 4.
class SearchError : public Error {
 public:
  using Error::Error;
};

}  // namespace seedgraph
