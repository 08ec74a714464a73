#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cgc::harness {

using CsvRow = std::vector<std::string>;

// Shortest decimal that parses back to the same double ("nan", "inf" too).
std::string format_double(double v);
double parse_double(std::string_view s);

// Quotes a field only when it holds a comma, quote or newline.
std::string csv_escape(std::string_view field);
std::string csv_line(const CsvRow& row);
// RFC 4180 style: quoted fields may contain commas, doubled quotes and newlines.
std::vector<CsvRow> parse_csv(std::string_view text);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

// Flat "key = value" document; '#' starts a comment line. Throws ParseError
// with the line number on a malformed line.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

}  // namespace cgc::harness
