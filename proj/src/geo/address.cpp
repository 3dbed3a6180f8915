#include "geoharvest/geo/address.hpp"

#include <map>
#include <mutex>
#include <regex>

#include "geoharvest/util/strings.hpp"

namespace geoharvest::geo {

namespace {

const std::regex& cached_regex(const std::string& pattern) {
  static std::mutex mu;
  static std::map<std::string, std::regex> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(pattern);
  if (it == cache.end()) {
    it = cache.emplace(pattern, std::regex(pattern, std::regex::icase)).first;
  }
  return it->second;
}

// "04109" or "04109 Leipzig"
const std::regex kPlzSegment(R"(^(\d{5})(?:\s+(.+))?$)");
// trailing house number: "5", "5a", "12-14", "3/1"
const std::regex kTrailingNumber(R"(^(.*?[^\s\d])\s+(\d+[a-zA-Z]?(?:\s*[-/]\s*\d+[a-zA-Z]?)?)$)");
// a 5-digit token inside a larger segment
const std::regex kPlzInline(R"(\b(\d{5})\b)");

struct Segment {
  std::string text;
  bool is_plz = false;
  std::string plz, city;
};

Segment classify(std::string seg) {
  Segment s;
  s.text = std::string(str::trim(seg));
  std::smatch m;
  if (std::regex_match(s.text, m, kPlzSegment)) {
    s.is_plz = true;
    s.plz = m[1];
    if (m[2].matched) s.city = str::collapse_ws(m[2].str());
  }
  return s;
}

}  // namespace

std::string Address::canonical() const {
  std::string out;
  if (street) {
    out += *street;
    if (house_number) out += " " + *house_number;
  }
  std::string tail;
  if (postal_code) tail += *postal_code;
  if (city) tail += (tail.empty() ? "" : " ") + *city;
  if (!tail.empty()) out += (out.empty() ? "" : ", ") + tail;
  return out;
}

Address normalize_address(const std::string& raw, const std::string& city_hint,
                          const AddressNormalizeConfig& cfg) {
  Address a;
  a.raw = raw;

  std::string work = raw;
  for (const auto& pat : cfg.noise_patterns) {
    work = std::regex_replace(work, cached_regex(pat), "");
  }
  work = str::collapse_ws(work);

  // split on commas; a PLZ embedded mid-segment gets its own segment
  std::vector<Segment> segments;
  for (auto& part : str::split(work, ',')) {
    std::string text(str::trim(part));
    if (text.empty()) continue;
    std::smatch m;
    if (!std::regex_match(text, m, kPlzSegment) && std::regex_search(text, m, kPlzInline) &&
        m.position(0) > 0) {
      segments.push_back(classify(text.substr(0, static_cast<size_t>(m.position(0)))));
      segments.push_back(classify(text.substr(static_cast<size_t>(m.position(0)))));
    } else {
      segments.push_back(classify(text));
    }
  }

  const Segment* plz_seg = nullptr;
  const Segment* street_seg = nullptr;
  for (const auto& s : segments) {
    if (s.is_plz && !plz_seg) plz_seg = &s;
    if (!s.is_plz && !street_seg &&
        s.text.find_first_not_of("0123456789 -/") != std::string::npos)
      street_seg = &s;
  }

  if (plz_seg) {
    a.postal_code = plz_seg->plz;
    if (!plz_seg->city.empty()) a.city = plz_seg->city;
  }
  if (!a.city && !city_hint.empty()) a.city = city_hint;

  if (!street_seg) {
    a.unresolvable = true;
    a.house_number_missing = true;
    return a;
  }

  std::smatch m;
  if (std::regex_match(street_seg->text, m, kTrailingNumber)) {
    a.street = str::collapse_ws(m[1].str());
    a.house_number = str::collapse_ws(m[2].str());
  } else {
    a.street = street_seg->text;
    a.house_number_missing = true;
  }
  return a;
}

}  // namespace geoharvest::geo
