// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MLMBIAS_CSV_HPP_
#define MLMBIAS_CSV_HPP_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace mlmbias {

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks. CRLF and LF line endings are both accepted.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns the next record, or nullopt at end of input. Throws ParseError
  // on an unterminated quoted field.
  std::optional<std::vector<std::string>> next();

  // Physical line on which the most recently returned record started.
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes a field when it contains a delimiter, quote or line break.
std::string csv_escape(const std::string& field);

}  // namespace mlmbias

#endif  // MLMBIAS_CSV_HPP_
