#include "geoharvest/extract/rules.hpp"

#include <regex>
#include <set>

#include "geoharvest/html/html.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::extract {

using nlohmann::json;

const std::vector<std::string>& known_record_fields() {
  static const std::vector<std::string> kFields = {
      "rent_net_eur", "size_sqm",    "rooms",       "year_built",
      "running_costs_eur", "energy_class", "raw_address", "postal_code"};
  return kFields;
}

namespace {

Transform transform_from_string(const std::string& s) {
  Transform t;
  if (s == "strip") t.kind = Transform::Kind::strip;
  else if (s == "numeric") t.kind = Transform::Kind::numeric;
  else if (s == "qualifier") t.kind = Transform::Kind::qualifier;
  else if (s == "boolean_presence") t.kind = Transform::Kind::boolean_presence;
  else if (s == "year") t.kind = Transform::Kind::year;
  else if (s.rfind("regex_capture:", 0) == 0) {
    t.kind = Transform::Kind::regex_capture;
    t.pattern = s.substr(std::string("regex_capture:").size());
  } else {
    throw ValidationError("rules: unknown transform '" + s + "'");
  }
  return t;
}

std::string transform_to_string(const Transform& t) {
  switch (t.kind) {
    case Transform::Kind::strip: return "strip";
    case Transform::Kind::numeric: return "numeric";
    case Transform::Kind::qualifier: return "qualifier";
    case Transform::Kind::boolean_presence: return "boolean_presence";
    case Transform::Kind::year: return "year";
    case Transform::Kind::regex_capture: return "regex_capture:" + t.pattern;
  }
  return "strip";
}

void check_regex(const std::string& pattern, const std::string& where) {
  try {
    std::regex re(pattern);
  } catch (const std::regex_error& e) {
    throw ValidationError("rules: bad regex in " + where + ": " + e.what());
  }
}

}  // namespace

void ExtractionRuleSet::validate() const {
  if (id_pattern.empty()) throw ValidationError("rules: missing id pattern");
  check_regex(id_pattern, "id");

  std::set<std::string> seen;
  const auto& known = known_record_fields();
  for (const auto& f : fields) {
    if (!seen.insert(f.field).second)
      throw ValidationError("rules: duplicate field '" + f.field + "'");
    if (std::find(known.begin(), known.end(), f.field) == known.end())
      throw ValidationError("rules: unknown record field '" + f.field + "'");
    html::Selector::parse(f.selector);  // throws ParseError on bad grammar
    for (const auto& t : f.post) {
      if (t.kind == Transform::Kind::regex_capture) check_regex(t.pattern, f.field);
    }
  }
  if (!amenities.vocab.empty()) {
    if (amenities.selector_template.find("{tag}") == std::string::npos)
      throw ValidationError("rules: amenity selector template needs a {tag} placeholder");
    for (const auto& tag : amenities.vocab) {
      html::Selector::parse(
          str::replace_all(amenities.selector_template, "{tag}", tag));
    }
  }
  if (!links.listing_selector.empty()) html::Selector::parse(links.listing_selector);
  if (!links.next_selector.empty()) html::Selector::parse(links.next_selector);
  if (coord_pattern) {
    check_regex(*coord_pattern, "coords");
    std::regex re(*coord_pattern);
    if (re.mark_count() != 2)
      throw ValidationError("rules: coord pattern must have exactly two capture groups");
  }
}

ExtractionRuleSet ExtractionRuleSet::from_json(const json& j) {
  ExtractionRuleSet r;
  r.locale = j.value("locale", "de") == "en" ? NumLocale::en : NumLocale::de;
  r.id_pattern = j.at("id").at("pattern").get<std::string>();
  for (const auto& f : j.at("fields")) {
    FieldRule rule;
    rule.field = f.at("field").get<std::string>();
    rule.selector = f.at("selector").get<std::string>();
    for (const auto& t : f.value("post", json::array()))
      rule.post.push_back(transform_from_string(t.get<std::string>()));
    r.fields.push_back(std::move(rule));
  }
  if (j.contains("amenities")) {
    r.amenities.selector_template = j["amenities"].value("selector_template", "");
    for (const auto& v : j["amenities"].value("vocab", json::array()))
      r.amenities.vocab.push_back(v.get<std::string>());
  }
  if (j.contains("links")) {
    r.links.listing_selector = j["links"].value("listing", "");
    r.links.next_selector = j["links"].value("next", "");
    r.links.search_url_template = j["links"].value("search_url_template", "");
  }
  if (j.contains("coords")) r.coord_pattern = j["coords"].at("pattern").get<std::string>();
  r.validate();
  return r;
}

json ExtractionRuleSet::to_json() const {
  json j;
  j["locale"] = locale == NumLocale::en ? "en" : "de";
  j["id"] = {{"pattern", id_pattern}};
  j["fields"] = json::array();
  for (const auto& f : fields) {
    json fj{{"field", f.field}, {"selector", f.selector}};
    fj["post"] = json::array();
    for (const auto& t : f.post) fj["post"].push_back(transform_to_string(t));
    j["fields"].push_back(fj);
  }
  if (!amenities.vocab.empty())
    j["amenities"] = {{"selector_template", amenities.selector_template},
                      {"vocab", amenities.vocab}};
  j["links"] = {{"listing", links.listing_selector},
                {"next", links.next_selector},
                {"search_url_template", links.search_url_template}};
  if (coord_pattern) j["coords"] = {{"pattern", *coord_pattern}};
  return j;
}

}  // namespace geoharvest::extract
