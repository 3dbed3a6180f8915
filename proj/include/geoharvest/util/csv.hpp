#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geoharvest::csv {

// RFC-4180-style escaping: quote when the field contains comma, quote or newline.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

// Parses a full CSV document (quoted fields, embedded newlines) into rows.
std::vector<std::vector<std::string>> parse(std::string_view text);

// Parses a CSV file whose first row is a header; returns (header, rows).
// Throws ParseError when a row's width differs from the header's.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(std::string_view name) const;  // -1 when absent
};
Table parse_table(std::string_view text);

}  // namespace geoharvest::csv
