#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sandnet::io {

/// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

/// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> lines(std::string_view text);

}  // namespace sandnet::io
