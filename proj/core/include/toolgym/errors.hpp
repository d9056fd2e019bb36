#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace toolgym {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document is missing a required field or has the wrong shape.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A template dependency points backwards or at its own step.
class CycleError : public Error {
 public:
  using Error::Error;
};

class PathSyntaxError : public Error {
 public:
  PathSyntaxError(std::size_t offset, const std::string& what)
      : Error("path syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class PathNotFound : public Error {
 public:
  PathNotFound(std::size_t segment, const std::string& what)
      : Error("path not found at segment " + std::to_string(segment) + ": " + what), segment_(segment) {}
  std::size_t segment() const noexcept { return segment_; }

 private:
  std::size_t segment_;
};

/// Two inserts share a cache key but disagree on the observation.
class ConflictError : public Error {
 public:
  ConflictError(std::string key_hex, std::uint64_t first_id, std::uint64_t second_id)
      : Error("conflicting observations for key " + key_hex + " (entries " + std::to_string(first_id) +
              " and " + std::to_string(second_id) + ")"),
        key_hex_(std::move(key_hex)),
        first_id_(first_id),
        second_id_(second_id) {}
  const std::string& key_hex() const noexcept { return key_hex_; }
  std::uint64_t first_id() const noexcept { return first_id_; }
  std::uint64_t second_id() const noexcept { return second_id_; }

 private:
  std::string key_hex_;
  std::uint64_t first_id_;
  std::uint64_t second_id_;
};

class UpstreamError : public Error {
 public:
  UpstreamError(std::size_t step, const std::string& what)
      : Error("upstream failed at step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A dependency extraction failed over cached observations; the cache is not closed.
class ClosureError : public Error {
 public:
  ClosureError(std::size_t step, const std::string& what)
      : Error("closure violated at step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t block, const std::string& reason)
      : Error("tool_call block " + std::to_string(block) + ": " + reason), block_(block), reason_(reason) {}
  std::size_t block() const noexcept { return block_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t block_;
  std::string reason_;
};

class GeneratorError : public Error {
 public:
  using Error::Error;
};

}  // namespace toolgym
