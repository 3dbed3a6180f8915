#include "geoharvest/compliance/robots.hpp"

#include <charconv>

#include "geoharvest/util/strings.hpp"

namespace geoharvest::compliance {

namespace {

// Known directive keys; anything else is counted as skipped.
enum class Key { user_agent, allow, disallow, crawl_delay, sitemap, unknown };

Key classify(std::string_view key) {
  std::string k = str::to_lower(key);
  if (k == "user-agent" || k == "useragent") return Key::user_agent;
  if (k == "allow") return Key::allow;
  if (k == "disallow") return Key::disallow;
  if (k == "crawl-delay" || k == "crawldelay") return Key::crawl_delay;
  if (k == "sitemap") return Key::sitemap;
  return Key::unknown;
}

bool valid_path_pattern(std::string_view p) {
  return !p.empty() && (p.front() == '/' || p.find('*') != std::string_view::npos);
}

}  // namespace

RobotsPolicy parse_robots(std::string_view text, std::string_view host) {
  RobotsPolicy policy;
  policy.host = std::string(host);

  // Consecutive User-agent lines form one group: every rule that follows
  // applies to each agent in the run. Tracked by index; the groups vector
  // reallocates.
  std::vector<size_t> run;
  bool last_line_was_agent = false;

  for (const std::string& raw_line : str::split_lines(text)) {
    std::string_view line = raw_line;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = str::trim(line);
    if (line.empty()) continue;

    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      ++policy.skipped_lines;
      continue;
    }
    std::string_view key = str::trim(line.substr(0, colon));
    std::string_view value = str::trim(line.substr(colon + 1));

    switch (classify(key)) {
      case Key::user_agent: {
        std::string agent = str::to_lower(value);
        if (agent.empty()) {
          ++policy.skipped_lines;
          break;
        }
        if (!last_line_was_agent) run.clear();
        policy.groups.push_back({agent, {}, std::nullopt});
        run.push_back(policy.groups.size() - 1);
        last_line_was_agent = true;
        continue;
      }
      case Key::allow:
      case Key::disallow: {
        last_line_was_agent = false;
        if (run.empty()) {
          ++policy.skipped_lines;  // rule before any user-agent line
          break;
        }
        if (value.empty()) break;  // empty pattern = no rule (allow-all semantics)
        if (!valid_path_pattern(value)) {
          ++policy.skipped_lines;
          break;
        }
        RobotsRule rule{classify(key) == Key::allow, std::string(value)};
        for (size_t idx : run) policy.groups[idx].rules.push_back(rule);
        break;
      }
      case Key::crawl_delay: {
        last_line_was_agent = false;
        if (run.empty()) {
          ++policy.skipped_lines;
          break;
        }
        double d = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
        if (ec != std::errc() || ptr != value.data() + value.size() || d < 0.0) {
          ++policy.skipped_lines;
          break;
        }
        for (size_t idx : run) policy.groups[idx].crawl_delay_s = d;
        break;
      }
      case Key::sitemap:
        last_line_was_agent = false;
        break;  // recognized, deliberately unused
      case Key::unknown:
        last_line_was_agent = false;
        ++policy.skipped_lines;
        break;
    }
  }

  // policy-level delay: prefer the "*" group, else the first group with one
  for (const auto& g : policy.groups) {
    if (g.agent == "*" && g.crawl_delay_s) {
      policy.crawl_delay_s = g.crawl_delay_s;
      break;
    }
  }
  if (!policy.crawl_delay_s) {
    for (const auto& g : policy.groups) {
      if (g.crawl_delay_s) {
        policy.crawl_delay_s = g.crawl_delay_s;
        break;
      }
    }
  }
  return policy;
}

std::string serialize_robots(const RobotsPolicy& policy) {
  std::string out;
  for (const auto& g : policy.groups) {
    out += "User-agent: " + g.agent + "\n";
    if (g.crawl_delay_s) {
      double d = *g.crawl_delay_s;
      char buf[64];
      if (d == static_cast<long long>(d))
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(d));
      else
        std::snprintf(buf, sizeof(buf), "%g", d);
      out += std::string("Crawl-delay: ") + buf + "\n";
    }
    for (const auto& r : g.rules) {
      out += (r.allow ? "Allow: " : "Disallow: ") + r.pattern + "\n";
    }
    out += "\n";
  }
  return out;
}

namespace {

// Full-string glob match, '*' = any sequence. Iterative with single-star
// backtracking; '*' is always a wildcard, never a literal.
bool glob_full(std::string_view path, std::string_view pattern) {
  size_t pi = 0, si = 0;
  size_t star_pi = std::string_view::npos, star_si = 0;
  while (si < path.size()) {
    if (pi < pattern.size() && pattern[pi] == '*') {
      star_pi = pi++;
      star_si = si;
    } else if (pi < pattern.size() && pattern[pi] == path[si]) {
      ++pi;
      ++si;
    } else if (star_pi != std::string_view::npos) {
      pi = star_pi + 1;
      si = ++star_si;
    } else {
      return false;
    }
  }
  while (pi < pattern.size() && pattern[pi] == '*') ++pi;
  return pi == pattern.size();
}

}  // namespace

bool pattern_matches(std::string_view path, std::string_view pattern) {
  // '$' is special only at the end; without it the pattern matches any
  // prefix, expressed here by appending '*' and doing a full match.
  std::string p(pattern);
  if (!p.empty() && p.back() == '$') {
    p.pop_back();
  } else {
    p += '*';
  }
  return glob_full(path, p);
}

const RobotsGroup* match_group(const RobotsPolicy& policy, std::string_view agent) {
  std::string agent_lc = str::to_lower(agent);
  const RobotsGroup* best = nullptr;
  size_t best_len = 0;
  const RobotsGroup* wildcard = nullptr;
  for (const auto& g : policy.groups) {
    if (g.agent == "*") {
      if (!wildcard) wildcard = &g;
      continue;
    }
    if (agent_lc.find(g.agent) != std::string::npos && g.agent.size() > best_len) {
      best = &g;
      best_len = g.agent.size();
    }
  }
  return best ? best : wildcard;
}

std::optional<double> RobotsPolicy::crawl_delay_for(std::string_view agent) const {
  const RobotsGroup* g = match_group(*this, agent);
  if (g && g->crawl_delay_s) return g->crawl_delay_s;
  return crawl_delay_s;
}

bool is_allowed(const RobotsPolicy& policy, std::string_view url_path, std::string_view agent) {
  const RobotsGroup* group = match_group(policy, agent);
  if (!group) return true;

  // most specific match = longest pattern; allow wins ties
  size_t best_len = 0;
  bool best_allow = true;
  bool any = false;
  for (const auto& r : group->rules) {
    if (!pattern_matches(url_path, r.pattern)) continue;
    size_t len = r.pattern.size();
    if (!any || len > best_len || (len == best_len && r.allow && !best_allow)) {
      best_len = len;
      best_allow = r.allow;
      any = true;
    }
  }
  return any ? best_allow : true;
}

}  // namespace geoharvest::compliance
