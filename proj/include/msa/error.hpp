#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula, signature or data file. `position` is a byte offset
// into the input (or a line number for line-oriented formats).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

// A search or enumeration ran past its configured budget without deciding.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace msa
