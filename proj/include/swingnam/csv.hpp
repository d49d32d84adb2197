#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace swingnam::io {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Splits one CSV record. Double-quoted fields may contain commas; "" is an
// escaped quote. Trailing '\r' is stripped.
std::vector<std::string> split_csv_line(std::string_view line);

// Lines of `text`, skipping blank ones; each entry carries its 1-based line number.
std::vector<std::pair<std::size_t, std::string>> csv_records(std::string_view text);

// Base-10 real with optional leading sign. Rejects trailing garbage.
std::optional<double> parse_real(std::string_view field);

// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

std::string quote_csv_field(std::string_view field);

}  // namespace swingnam::io
