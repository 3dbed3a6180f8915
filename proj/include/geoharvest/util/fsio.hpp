#pragma once

#include <string>
#include <string_view>

namespace geoharvest::fsio {

// Reads a whole file into a string. Throws IoError if missing/unreadable.
std::string read_file(const std::string& path);

// Writes content atomically-ish (temp file + rename within the same dir).
void write_file(const std::string& path, std::string_view content);

void ensure_dir(const std::string& path);

}  // namespace geoharvest::fsio
