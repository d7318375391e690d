#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrlcast {

// Bad configuration or unusable arguments: wrong delimiters, unknown task,
// missing files. CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad data at evaluation time (missing prediction ids, mixed tasks in one
// pair file). CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Strict decode failure. Carries the byte offset of the first defect and a
// short machine-readable kind ("empty segment", "dangling escape", ...).
class CodecError : public std::runtime_error {
 public:
  CodecError(std::size_t offset, const std::string& kind)
      : std::runtime_error(kind + " at offset " + std::to_string(offset)),
        offset_(offset),
        kind_(kind) {}
  std::size_t offset() const { return offset_; }
  const std::string& kind() const { return kind_; }

 private:
  std::size_t offset_;
  std::string kind_;
};

}  // namespace mrlcast
