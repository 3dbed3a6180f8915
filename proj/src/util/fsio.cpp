#include "geoharvest/util/fsio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "geoharvest/util/errors.hpp"

namespace fs = std::filesystem;

namespace geoharvest::fsio {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
  }
  fs::rename(tmp, p);
}

void ensure_dir(const std::string& path) { fs::create_directories(path); }

}  // namespace geoharvest::fsio
