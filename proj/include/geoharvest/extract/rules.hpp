#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoharvest/extract/numbers.hpp"

namespace geoharvest::extract {

struct Transform {
  enum class Kind { strip, regex_capture, numeric, qualifier, boolean_presence, year };
  Kind kind = Kind::strip;
  std::string pattern;  // regex_capture only
};

struct FieldRule {
  std::string field;
  std::string selector;
  std::vector<Transform> post;
};

struct LinkRules {
  std::string listing_selector;
  std::string next_selector;
  std::string search_url_template;  // e.g. "/search/{object}/{place}/{sort}/page1.html"
};

struct AmenityRules {
  std::string selector_template;  // "{tag}" placeholder, e.g. "ul.amenities li.{tag}"
  std::vector<std::string> vocab;
};

// Declarative mapping from page structure to typed record fields.
struct ExtractionRuleSet {
  NumLocale locale = NumLocale::de;
  std::string id_pattern;  // regex over the URL with one capture group
  std::vector<FieldRule> fields;
  AmenityRules amenities;
  LinkRules links;
  std::optional<std::string> coord_pattern;  // regex with (lat, lon) captures

  // field names unique + known, selectors and regexes compile
  void validate() const;  // throws ValidationError

  static ExtractionRuleSet from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

const std::vector<std::string>& known_record_fields();

}  // namespace geoharvest::extract
