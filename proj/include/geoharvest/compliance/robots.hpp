#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Robots exclusion protocol (RFC 9309) with the de-facto Crawl-delay
// extension. Parsing never throws: malformed lines are skipped and counted,
// and an empty file yields a permissive policy.
namespace geoharvest::compliance {

struct RobotsRule {
  bool allow = false;
  std::string pattern;  // starts with "/" or contains "*"
};

struct RobotsGroup {
  std::string agent;  // lowercase product token, or "*"
  std::vector<RobotsRule> rules;
  std::optional<double> crawl_delay_s;
};

struct RobotsPolicy {
  std::string host;
  std::vector<RobotsGroup> groups;
  std::optional<double> crawl_delay_s;  // delay of the "*" group, else first group carrying one
  std::string fetched_at;
  int skipped_lines = 0;

  std::optional<double> crawl_delay_for(std::string_view agent) const;
};

RobotsPolicy parse_robots(std::string_view text, std::string_view host);

// Canonical textual form; parse(serialize(p)) reproduces p for well-formed
// policies.
std::string serialize_robots(const RobotsPolicy& policy);

// Longest-match decision over the most specific matching agent group.
// No matching rule (or no matching group) means allowed.
bool is_allowed(const RobotsPolicy& policy, std::string_view url_path, std::string_view agent);

// True when `path` matches `pattern` ('*' wildcard, '$' end anchor,
// anchored at the path start).
bool pattern_matches(std::string_view path, std::string_view pattern);

// Group lookup used by is_allowed: longest agent token that is a
// case-insensitive substring of `agent`, with "*" as fallback.
const RobotsGroup* match_group(const RobotsPolicy& policy, std::string_view agent);

}  // namespace geoharvest::compliance
