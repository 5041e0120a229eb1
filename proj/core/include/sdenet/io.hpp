#pragma once

// Small shared helpers for the text formats: shortest round-trip double
// formatting, a stable 64-bit content hash, and atomic file writes.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdenet {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

// FNV-1a over raw bytes.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::span<const double> values);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Splits one CSV line on commas (no quoting; all sdenet CSVs are numeric).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace sdenet
