#pragma once

// Brute-force robots decision oracle: recursive glob matching and exhaustive
// rule scoring, deliberately independent of the library's iterative matcher.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "geoharvest/compliance/robots.hpp"
#include "geoharvest/util/rng.hpp"
#include "geoharvest/util/strings.hpp"

namespace robots_oracle {

inline bool oracle_match(std::string_view path, std::string_view pattern) {
  bool anchored = !pattern.empty() && pattern.back() == '$';
  if (anchored) pattern.remove_suffix(1);

  std::function<bool(size_t, size_t)> rec = [&](size_t pi, size_t si) -> bool {
    if (pi == pattern.size()) return anchored ? si == path.size() : true;
    if (pattern[pi] == '*') {
      for (size_t k = si; k <= path.size(); ++k)
        if (rec(pi + 1, k)) return true;
      return false;
    }
    if (si < path.size() && path[si] == pattern[pi]) return rec(pi + 1, si + 1);
    return false;
  };
  return rec(0, 0);
}

inline bool oracle_is_allowed(const geoharvest::compliance::RobotsPolicy& policy,
                              std::string_view path, std::string_view agent) {
  using geoharvest::compliance::RobotsGroup;
  std::string agent_lc = geoharvest::str::to_lower(agent);
  const RobotsGroup* chosen = nullptr;
  size_t best_len = 0;
  for (const auto& g : policy.groups) {
    if (g.agent == "*") continue;
    if (agent_lc.find(g.agent) != std::string::npos && g.agent.size() > best_len) {
      chosen = &g;
      best_len = g.agent.size();
    }
  }
  if (!chosen) {
    for (const auto& g : policy.groups)
      if (g.agent == "*") {
        chosen = &g;
        break;
      }
  }
  if (!chosen) return true;

  bool best_allow = true;
  long best_score = -1;
  for (const auto& r : chosen->rules) {
    if (!oracle_match(path, r.pattern)) continue;
    long score = static_cast<long>(r.pattern.size());
    if (score > best_score || (score == best_score && r.allow && !best_allow)) {
      best_score = score;
      best_allow = r.allow;
    }
  }
  return best_score < 0 ? true : best_allow;
}

inline geoharvest::compliance::RobotsPolicy random_policy(geoharvest::rng::Xoshiro256pp& r) {
  using geoharvest::compliance::RobotsGroup;
  using geoharvest::compliance::RobotsPolicy;
  static const std::vector<std::string> kAgents = {"*", "geoharvest", "crawler", "bot"};
  static const std::vector<std::string> kSegments = {"private", "listing", "search", "img",
                                                     "a",       "ab",      "p"};
  RobotsPolicy p;
  p.host = "test";
  int ngroups = 1 + static_cast<int>(r.below(3));
  for (int g = 0; g < ngroups; ++g) {
    RobotsGroup grp;
    grp.agent = kAgents[r.below(kAgents.size())];
    int nrules = static_cast<int>(r.below(6));
    for (int k = 0; k < nrules; ++k) {
      std::string pat = "/";
      int nseg = 1 + static_cast<int>(r.below(3));
      for (int s = 0; s < nseg; ++s) {
        if (r.bernoulli(0.25)) pat += "*";
        else pat += kSegments[r.below(kSegments.size())];
        if (s + 1 < nseg) pat += "/";
      }
      if (r.bernoulli(0.2)) pat += "$";
      grp.rules.push_back({r.bernoulli(0.4), pat});
    }
    p.groups.push_back(std::move(grp));
  }
  return p;
}

inline std::string random_path(geoharvest::rng::Xoshiro256pp& r) {
  static const std::vector<std::string> kSegments = {"private", "listing", "search",
                                                     "img",     "a",       "ab",
                                                     "p",       "x",       "page1.html"};
  std::string path = "/";
  int nseg = 1 + static_cast<int>(r.below(3));
  for (int s = 0; s < nseg; ++s) {
    path += kSegments[r.below(kSegments.size())];
    if (s + 1 < nseg) path += "/";
  }
  return path;
}

}  // namespace robots_oracle
