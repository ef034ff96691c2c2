#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mediadisc::csv {

// RFC-4180 record reader. Quoted fields may span physical lines; the reader
// tracks the line on which each record starts for diagnostics.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns std::nullopt at end of input. A record with an unterminated or
  // misplaced quote is returned with `malformed` set.
  struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;
    bool malformed = false;
  };
  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

// Splits a single line (no embedded newlines). Returns std::nullopt on a
// quoting error.
std::optional<std::vector<std::string>> split_line(std::string_view line);

// Quotes a field only when it contains a delimiter, quote, or line break.
std::string quote(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace mediadisc::csv
