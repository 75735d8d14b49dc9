#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sublap {

/// Shortest decimal string that parses back to exactly `v`; locale-free.
std::string format_double(double v);

/// Writes an 8-bit binary PGM (P5). `pixels` is row-major, width * height.
void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& pixels);

/// Throws sublap::Error if the file cannot be opened.
void write_text(const std::filesystem::path& path, const std::string& contents);

} // namespace sublap
