#pragma once

#include <filesystem>
#include <string>

namespace mediapulse {

// Reads a whole file as bytes. Throws Error when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes bytes, replacing any existing file. Throws Error on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mediapulse
