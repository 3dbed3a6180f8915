#pragma once

#include <string>
#include <string_view>

namespace geoharvest::hash {

// Hex-encoded SHA-256 of a byte string (OpenSSL-backed).
std::string sha256_hex(std::string_view data);

// Hex-encoded SHA-256 of file contents. Throws IoError if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace geoharvest::hash
