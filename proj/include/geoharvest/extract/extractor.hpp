#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geoharvest/extract/record.hpp"
#include "geoharvest/extract/rules.hpp"

namespace geoharvest::extract {

struct ExtractionResult {
  ListingRecord record;
  std::vector<FieldIssue> issues;
};

// Rule-driven extraction. Never aborts on a single bad field: each rule
// either fills its field or contributes an issue.
ExtractionResult extract_record(std::string_view html_bytes, const ExtractionRuleSet& rules,
                                const std::string& url, const std::string& scraped_at);

// Anchor targets under `selector`, resolved against base_url, fragments
// stripped, de-duplicated preserving first-seen order.
std::vector<std::string> extract_links(std::string_view html_bytes, const std::string& selector,
                                       const std::string& base_url);

// First (lat, lon) regex match over script bodies and anchor hrefs;
// out-of-range coordinates are rejected with an issue.
std::optional<geo::GeoPoint> extract_embedded_coords(std::string_view html_bytes,
                                                     const std::string& coord_pattern,
                                                     std::vector<FieldIssue>* issues = nullptr);

}  // namespace geoharvest::extract
