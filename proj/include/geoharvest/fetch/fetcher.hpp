#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoharvest/compliance/robots.hpp"
#include "geoharvest/extract/rules.hpp"
#include "geoharvest/util/timeutil.hpp"

namespace geoharvest::fetch {

// Local-time fetch window [start_hour, end_hour); may wrap past midnight
// (e.g. 22 -> 6 for night-time runs).
struct TimeWindow {
  int start_hour = 0;
  int end_hour = 24;
  bool contains(int hour) const;
};

struct FetchPlan {
  std::vector<std::string> seed_urls;
  double min_delay_s = 10.0;  // floor; the robots crawl-delay can only raise it
  std::optional<TimeWindow> window;
  int max_retries = 3;  // total attempt budget per URL
  std::string user_agent = "geoharvest/0.1 (research crawler)";
  bool respect_robots = true;
};

void validate_plan(const FetchPlan& plan);  // throws ValidationError

enum class FetchStatus {
  ok,
  http_error,
  network_error,
  skipped_disallowed,
  skipped_window,
  skipped_seen,  // incremental re-crawl convention: known URLs are not re-fetched
};

std::string status_name(FetchStatus s);

struct FetchResult {
  std::string url;
  FetchStatus status = FetchStatus::ok;
  int http_code = 0;
  std::optional<std::string> body;  // present iff status == ok
  std::string fetched_at;
  int attempt = 0;
};

// Append-only audit record: one line per attempt, terminal lines flagged.
// t_mono_ms is a monotonic clock for politeness-gap assertions.
struct FetchLogEntry {
  std::string timestamp;
  double t_mono_ms = 0.0;
  std::string url;
  std::string status;
  int attempt = 0;
  bool terminal = false;
  int http_code = 0;
  std::string note;
};

std::string log_to_jsonl(const std::vector<FetchLogEntry>& log);

// Serialized per-host fetch queue that owns the politeness clock: the next
// request starts no earlier than `delay` after the previous one completed,
// which guarantees server-observed gaps of at least `delay`.
class PoliteClient {
 public:
  PoliteClient(const std::string& base_url, FetchPlan plan, compliance::RobotsPolicy policy,
               const timeutil::Clock* clock = nullptr);
  ~PoliteClient();

  FetchResult get(const std::string& url_or_path);

  // Swaps in the policy parsed from a just-fetched robots.txt; the
  // politeness clock keeps running across the swap.
  void set_policy(compliance::RobotsPolicy policy);

  const std::vector<FetchLogEntry>& log() const;
  const std::set<std::string>& seen_urls() const;
  void mark_seen(const std::string& url);
  double effective_delay_s() const;
  std::string base_origin() const;
  const FetchPlan& plan() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct FetchOutcome {
  std::vector<FetchResult> results;
};

// Every URL yields exactly one terminal FetchResult delivered to the sink in
// completion order. A sink exception aborts the run; the client's log keeps
// everything up to that point.
FetchOutcome run_plan(PoliteClient& client, const std::vector<std::string>& urls,
                      const std::function<void(const FetchResult&)>& sink);

// Convenience: single-shot plan execution against one host.
FetchOutcome run_plan(const FetchPlan& plan, const compliance::RobotsPolicy& policy,
                      const std::string& base_url,
                      const std::function<void(const FetchResult&)>& sink,
                      std::vector<FetchLogEntry>* log_out = nullptr,
                      const timeutil::Clock* clock = nullptr);

struct SearchQuery {
  std::string place;
  std::string object_type;
  std::vector<std::string> sorts;  // multiple sort orders improve coverage
};

// Walks every sort order's result pages and returns the de-duplicated union
// of listing URLs in first-seen order. Zero fetched pages is a warning (the
// client log records it), not an error.
std::vector<std::string> enumerate_listings(PoliteClient& client, const SearchQuery& query,
                                            const extract::LinkRules& rules);

}  // namespace geoharvest::fetch
