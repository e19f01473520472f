#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace pcnsim {

/// Whole-file read; throws InputError naming the path.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// 1-based line number of a byte offset in text.
std::size_t line_of_offset(std::string_view text, std::size_t offset);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace pcnsim
