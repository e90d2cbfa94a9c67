#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dltrace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. offset is the byte position where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Arithmetic between elements of different fields.
class FieldMismatchError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// p-adic computation could not certify its result at the carried precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dltrace
