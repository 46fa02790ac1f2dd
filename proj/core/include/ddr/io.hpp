#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ddr::io {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::vector<std::string_view> split_csv_line(std::string_view line);

/// Parses a full field as a double; throws std::invalid_argument otherwise.
double parse_double(std::string_view field);

}  // namespace ddr::io
