#include "mediadisc/csv.hpp"

namespace mediadisc::csv {

namespace {

// Parses `text` starting at `pos` into fields; returns false when the text
// ends inside a quoted field.
bool parse_fields(std::string_view text, std::vector<std::string>& fields, bool& bad_quote) {
  fields.clear();
  bad_quote = false;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '"') {
      if (!field.empty() || field_was_quoted) bad_quote = true;
      in_quotes = true;
      field_was_quoted = true;
    } else {
      if (field_was_quoted) bad_quote = true;
      field.push_back(c);
    }
  }
  if (in_quotes) return false;
  fields.push_back(std::move(field));
  return true;
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace

std::optional<Reader::Record> Reader::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  ++line_;
  strip_cr(line);
  Record rec;
  rec.line = line_;
  std::string buffer = line;
  bool bad_quote = false;
  while (!parse_fields(buffer, rec.fields, bad_quote)) {
    if (!std::getline(in_, line)) {
      rec.malformed = true;
      return rec;
    }
    ++line_;
    strip_cr(line);
    buffer.push_back('\n');
    buffer += line;
  }
  rec.malformed = bad_quote;
  return rec;
}

std::optional<std::vector<std::string>> split_line(std::string_view line) {
  std::vector<std::string> fields;
  bool bad_quote = false;
  if (!parse_fields(line, fields, bad_quote) || bad_quote) return std::nullopt;
  return fields;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(fields[i]);
  }
  return out;
}

}  // namespace mediadisc::csv
