#include "geoharvest/extract/extractor.hpp"

#include <regex>

#include "geoharvest/html/html.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"
#include "geoharvest/util/url.hpp"

namespace geoharvest::extract {

namespace {

bool has_any_element(const html::Node& n) {
  if (n.type == html::Node::Type::element) return true;
  for (const auto& c : n.children)
    if (has_any_element(*c)) return true;
  return false;
}

struct FieldValue {
  std::string text;
  std::optional<ParsedNumber> number;
  std::optional<int> year;
};

FieldValue apply_transforms(const std::string& raw, const FieldRule& rule, NumLocale locale) {
  FieldValue v;
  v.text = raw;
  for (const auto& t : rule.post) {
    switch (t.kind) {
      case Transform::Kind::strip:
        v.text = str::collapse_ws(v.text);
        break;
      case Transform::Kind::regex_capture: {
        std::regex re(t.pattern);
        std::smatch m;
        if (!std::regex_search(v.text, m, re) || m.size() < 2)
          throw ParseError("regex capture matched nothing");
        v.text = m[1];
        break;
      }
      case Transform::Kind::numeric:
      case Transform::Kind::qualifier:
        v.number = parse_numeric(v.text, locale);
        break;
      case Transform::Kind::year: {
        ParsedNumber n = parse_numeric(v.text, locale);
        v.year = static_cast<int>(n.value);
        break;
      }
      case Transform::Kind::boolean_presence:
        break;  // presence decided by the selector match itself
    }
  }
  return v;
}

void assign_field(ListingRecord& r, const std::string& field, const FieldValue& v,
                  std::vector<FieldIssue>& issues) {
  auto positive = [&](const std::optional<ParsedNumber>& n) {
    if (!n) {
      issues.push_back({field, FieldIssue::Kind::unparseable, "no numeric transform applied"});
      return false;
    }
    if (n->value <= 0.0) {
      issues.push_back({field, FieldIssue::Kind::implausible_format, "non-positive value"});
      return false;
    }
    return true;
  };

  if (field == "rent_net_eur") {
    if (positive(v.number)) r.rent_net_eur = v.number;
  } else if (field == "size_sqm") {
    if (positive(v.number)) r.size_sqm = v.number;
  } else if (field == "rooms") {
    if (positive(v.number)) r.rooms = v.number;
  } else if (field == "running_costs_eur") {
    if (positive(v.number)) r.running_costs_eur = v.number;
  } else if (field == "year_built") {
    if (!v.year) {
      issues.push_back({field, FieldIssue::Kind::unparseable, "no year transform applied"});
    } else if (*v.year < 0 || *v.year > 9999) {
      issues.push_back({field, FieldIssue::Kind::implausible_format, "year out of format range"});
    } else {
      r.year_built = v.year;
    }
  } else if (field == "energy_class") {
    r.energy_class = v.text;
  } else if (field == "raw_address") {
    r.raw_address = v.text;
  } else if (field == "postal_code") {
    if (v.text.size() == 5 && v.text.find_first_not_of("0123456789") == std::string::npos) {
      r.postal_code = v.text;
    } else {
      issues.push_back({field, FieldIssue::Kind::implausible_format, "not a 5-digit code"});
    }
  }
}

}  // namespace

std::optional<geo::GeoPoint> extract_embedded_coords(std::string_view html_bytes,
                                                     const std::string& coord_pattern,
                                                     std::vector<FieldIssue>* issues) {
  html::Document doc = html::Document::parse(html_bytes);
  std::string haystack;
  auto scripts = html::select_all(doc.root(), html::Selector::parse("script"));
  for (const auto* s : scripts) haystack += s->text_content() + "\n";
  auto anchors = html::select_all(doc.root(), html::Selector::parse("a"));
  for (const auto* a : anchors) {
    if (const std::string* href = a->attr("href")) haystack += *href + "\n";
  }

  std::regex re(coord_pattern);
  std::smatch m;
  if (!std::regex_search(haystack, m, re) || m.size() < 3) return std::nullopt;

  geo::GeoPoint p;
  try {
    p.lat = std::stod(m[1]);
    p.lon = std::stod(m[2]);
  } catch (const std::exception&) {
    if (issues) issues->push_back({"coords", FieldIssue::Kind::unparseable, "bad coordinate text"});
    return std::nullopt;
  }
  if (!p.valid()) {
    if (issues)
      issues->push_back({"coords", FieldIssue::Kind::implausible_format,
                         "coordinates outside WGS84 bounds"});
    return std::nullopt;
  }
  p.quality = geo::CoordQuality::embedded;
  return p;
}

ExtractionResult extract_record(std::string_view html_bytes, const ExtractionRuleSet& rules,
                                const std::string& url, const std::string& scraped_at) {
  ExtractionResult out;
  ListingRecord& r = out.record;
  r.url = url;
  r.scraped_at = scraped_at;

  {
    std::regex re(rules.id_pattern);
    std::smatch m;
    if (std::regex_search(url, m, re) && m.size() >= 2) {
      r.id = m[1];
    } else {
      r.id = url;  // fall back to the full URL as identity
      out.issues.push_back({"id", FieldIssue::Kind::unparseable, "id pattern did not match url"});
    }
  }

  html::Document doc = html::Document::parse(html_bytes);
  if (html_bytes.empty() || !has_any_element(doc.root())) {
    out.issues.push_back({"document", FieldIssue::Kind::fatal, "no parseable html content"});
    return out;
  }

  for (const auto& rule : rules.fields) {
    const html::Node* n = html::select_first(doc.root(), html::Selector::parse(rule.selector));
    if (!n) {
      out.issues.push_back({rule.field, FieldIssue::Kind::missing, "selector matched nothing"});
      continue;
    }
    try {
      FieldValue v = apply_transforms(html::inner_text(*n), rule, rules.locale);
      assign_field(r, rule.field, v, out.issues);
    } catch (const ParseError& e) {
      out.issues.push_back({rule.field, FieldIssue::Kind::unparseable, e.what()});
    }
  }

  for (const auto& tag : rules.amenities.vocab) {
    auto sel = html::Selector::parse(
        str::replace_all(rules.amenities.selector_template, "{tag}", tag));
    if (html::select_first(doc.root(), sel)) r.amenities.insert(tag);
  }

  if (rules.coord_pattern) {
    r.coords = extract_embedded_coords(html_bytes, *rules.coord_pattern, &out.issues);
    if (!r.coords) {
      bool flagged = false;
      for (const auto& i : out.issues)
        if (i.field == "coords") flagged = true;
      if (!flagged)
        out.issues.push_back({"coords", FieldIssue::Kind::missing, "no embedded coordinates"});
    }
  }
  return out;
}

std::vector<std::string> extract_links(std::string_view html_bytes, const std::string& selector,
                                       const std::string& base_url) {
  auto base = url::parse(base_url);
  if (!base) throw ValidationError("extract_links: base url must be absolute: " + base_url);

  html::Document doc = html::Document::parse(html_bytes);
  auto nodes = html::select_all(doc.root(), html::Selector::parse(selector));

  std::vector<std::string> out;
  for (const auto* n : nodes) {
    const std::string* href = n->attr("href");
    if (!href || href->empty()) continue;
    url::Url resolved = url::resolve(*base, *href);
    resolved.fragment.clear();
    std::string abs = resolved.str();
    bool seen = false;
    for (const auto& existing : out)
      if (existing == abs) seen = true;
    if (!seen) out.push_back(std::move(abs));
  }
  return out;
}

}  // namespace geoharvest::extract
