// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MLMBIAS_ERROR_HPP_
#define MLMBIAS_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlmbias {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A value parsed fine but violates a documented invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlmbias

#endif  // MLMBIAS_ERROR_HPP_
