#include "geoharvest/util/url.hpp"

#include <vector>

namespace geoharvest::url {

std::string Url::origin() const {
  std::string out = scheme + "://" + host;
  if (port >= 0) out += ":" + std::to_string(port);
  return out;
}

std::string Url::path_and_query() const {
  std::string out = path.empty() ? "/" : path;
  if (!query.empty()) out += "?" + query;
  return out;
}

std::string Url::str() const {
  std::string out = origin() + path_and_query();
  if (!fragment.empty()) out += "#" + fragment;
  return out;
}

std::optional<Url> parse(std::string_view s) {
  auto scheme_end = s.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  Url u;
  u.scheme = std::string(s.substr(0, scheme_end));
  s.remove_prefix(scheme_end + 3);

  auto authority_end = s.find_first_of("/?#");
  std::string_view authority = s.substr(0, authority_end);
  if (authority.empty()) return std::nullopt;
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    u.host = std::string(authority.substr(0, colon));
    auto port_sv = authority.substr(colon + 1);
    int port = 0;
    for (char c : port_sv) {
      if (c < '0' || c > '9') return std::nullopt;
      port = port * 10 + (c - '0');
    }
    u.port = port_sv.empty() ? -1 : port;
  } else {
    u.host = std::string(authority);
  }
  if (authority_end == std::string_view::npos) return u;
  s.remove_prefix(authority_end);

  auto frag = s.find('#');
  if (frag != std::string_view::npos) {
    u.fragment = std::string(s.substr(frag + 1));
    s = s.substr(0, frag);
  }
  auto q = s.find('?');
  if (q != std::string_view::npos) {
    u.query = std::string(s.substr(q + 1));
    s = s.substr(0, q);
  }
  u.path = s.empty() ? "/" : std::string(s);
  return u;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  size_t i = 0;
  bool trailing_slash = !path.empty() && path.back() == '/';
  while (i < path.size()) {
    size_t j = path.find('/', i);
    std::string_view seg = path.substr(i, j == std::string_view::npos ? j : j - i);
    i = (j == std::string_view::npos) ? path.size() : j + 1;
    if (seg == "." || seg.empty()) continue;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(seg);
  }
  std::string result = "/";
  for (size_t k = 0; k < out.size(); ++k) {
    result.append(out[k]);
    if (k + 1 < out.size()) result += '/';
  }
  if (trailing_slash && result.back() != '/') result += '/';
  return result;
}

Url resolve(const Url& base, std::string_view ref) {
  if (auto abs = parse(ref)) return *abs;
  Url out = base;
  out.fragment.clear();
  out.query.clear();

  if (ref.empty()) return out;
  // protocol-relative //host/...
  if (ref.size() >= 2 && ref[0] == '/' && ref[1] == '/') {
    auto abs = parse(base.scheme + ":" + std::string(ref));
    if (abs) return *abs;
  }

  std::string_view rest = ref;
  std::string frag, query;
  if (auto f = rest.find('#'); f != std::string_view::npos) {
    frag = std::string(rest.substr(f + 1));
    rest = rest.substr(0, f);
  }
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }

  if (rest.empty()) {
    out.path = base.path;  // query/fragment-only reference
  } else if (rest.front() == '/') {
    out.path = remove_dot_segments(rest);
  } else {
    std::string_view dir = base.path;
    auto last = dir.rfind('/');
    dir = (last == std::string_view::npos) ? "/" : dir.substr(0, last + 1);
    out.path = remove_dot_segments(std::string(dir) + std::string(rest));
  }
  out.query = query;
  out.fragment = frag;
  return out;
}

}  // namespace geoharvest::url
