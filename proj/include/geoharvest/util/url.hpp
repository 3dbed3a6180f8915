#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace geoharvest::url {

struct Url {
  std::string scheme;
  std::string host;
  int port = -1;  // -1 = default for scheme
  std::string path = "/";
  std::string query;     // without '?'
  std::string fragment;  // without '#'

  std::string origin() const;          // scheme://host[:port]
  std::string path_and_query() const;  // /path[?query]
  std::string str() const;             // full URL, fragment included if set
};

std::optional<Url> parse(std::string_view s);

// Removes "." and ".." segments per RFC 3986 §5.2.4.
std::string remove_dot_segments(std::string_view path);

// Resolves `ref` (absolute, path-absolute or relative) against `base`.
Url resolve(const Url& base, std::string_view ref);

}  // namespace geoharvest::url
