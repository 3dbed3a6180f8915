#include "geoharvest/fetch/fetcher.hpp"

#include <json.hpp>

#include <cmath>
#include <thread>

#include "geoharvest/extract/extractor.hpp"
#include "geoharvest/net/http.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"
#include "geoharvest/util/url.hpp"

namespace geoharvest::fetch {

using SteadyClock = std::chrono::steady_clock;

bool TimeWindow::contains(int hour) const {
  if (start_hour == end_hour) return true;  // degenerate: always open
  if (start_hour < end_hour) return hour >= start_hour && hour < end_hour;
  return hour >= start_hour || hour < end_hour;  // wraps midnight
}

void validate_plan(const FetchPlan& plan) {
  if (plan.min_delay_s < 0) throw ValidationError("fetch plan: min_delay_s must be >= 0");
  if (plan.max_retries < 1) throw ValidationError("fetch plan: max_retries must be >= 1");
  if (plan.user_agent.empty()) throw ValidationError("fetch plan: user_agent must be non-empty");
  if (plan.window) {
    if (plan.window->start_hour < 0 || plan.window->start_hour >= 24 ||
        plan.window->end_hour < 0 || plan.window->end_hour > 24)
      throw ValidationError("fetch plan: window hours must lie in [0,24)");
  }
  for (const auto& u : plan.seed_urls) {
    if (u.empty()) throw ValidationError("fetch plan: empty seed url");
  }
}

std::string status_name(FetchStatus s) {
  switch (s) {
    case FetchStatus::ok: return "ok";
    case FetchStatus::http_error: return "http_error";
    case FetchStatus::network_error: return "network_error";
    case FetchStatus::skipped_disallowed: return "skipped_disallowed";
    case FetchStatus::skipped_window: return "skipped_window";
    default: return "skipped_seen";
  }
}

std::string log_to_jsonl(const std::vector<FetchLogEntry>& log) {
  std::string out;
  for (const auto& e : log) {
    nlohmann::json j{{"timestamp", e.timestamp}, {"t_mono_ms", e.t_mono_ms}, {"url", e.url},
                     {"status", e.status},       {"attempt", e.attempt},     {"terminal", e.terminal}};
    if (e.http_code) j["http_code"] = e.http_code;
    if (!e.note.empty()) j["note"] = e.note;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

// product token for robots group matching: "geoharvest/0.1 (...)" -> "geoharvest"
std::string product_token(const std::string& user_agent) {
  std::string tok;
  for (char c : user_agent) {
    if (c == '/' || c == ' ' || c == '(') break;
    tok += c;
  }
  return tok.empty() ? user_agent : tok;
}

double mono_ms(SteadyClock::time_point t0) {
  return std::chrono::duration<double, std::milli>(SteadyClock::now() - t0).count();
}

}  // namespace

struct PoliteClient::Impl {
  FetchPlan plan;
  compliance::RobotsPolicy policy;
  url::Url base;
  std::string agent_token;
  double effective_delay_s;
  net::HttpSession session;
  const timeutil::Clock* clock;
  timeutil::SystemClock system_clock;

  std::vector<FetchLogEntry> log;
  std::set<std::string> seen;
  SteadyClock::time_point epoch = SteadyClock::now();
  std::optional<SteadyClock::time_point> next_allowed;

  Impl(const std::string& base_url, FetchPlan p, compliance::RobotsPolicy pol,
       const timeutil::Clock* clk)
      : plan(std::move(p)),
        policy(std::move(pol)),
        base([&] {
          auto u = url::parse(base_url);
          if (!u) throw ValidationError("fetcher: base url must be absolute: " + base_url);
          return *u;
        }()),
        agent_token(str::to_lower(product_token(plan.user_agent))),
        effective_delay_s([&] {
          double d = plan.min_delay_s;
          if (auto cd = policy.crawl_delay_for(agent_token)) d = std::max(d, *cd);
          return d;
        }()),
        session(base.origin(), plan.user_agent),
        clock(clk ? clk : &system_clock) {
    if (!plan.respect_robots) {
      append_note(
          "robots.txt enforcement DISABLED by explicit override; "
          "requests may violate the host's published policy");
    }
  }

  void append_note(const std::string& note) {
    log.push_back({timeutil::iso8601_utc(clock->now()), mono_ms(epoch), base.origin(), "note", 0,
                   false, 0, note});
  }

  void append(const std::string& abs_url, const std::string& status, int attempt, bool terminal,
              int http_code, const std::string& note = "") {
    log.push_back({timeutil::iso8601_utc(clock->now()), mono_ms(epoch), abs_url, status, attempt,
                   terminal, http_code, note});
  }

  void wait_for_slot() {
    if (next_allowed && *next_allowed > SteadyClock::now())
      std::this_thread::sleep_until(*next_allowed);
  }

  // Scheduling from request completion (not start) keeps server-observed
  // gaps at >= delay even under client/server clock jitter.
  void schedule_next(double delay_s) {
    next_allowed = SteadyClock::now() + std::chrono::duration_cast<SteadyClock::duration>(
                                            std::chrono::duration<double>(delay_s));
  }
};

PoliteClient::PoliteClient(const std::string& base_url, FetchPlan plan,
                           compliance::RobotsPolicy policy, const timeutil::Clock* clock) {
  validate_plan(plan);
  impl_ = std::make_unique<Impl>(base_url, std::move(plan), std::move(policy), clock);
}

PoliteClient::~PoliteClient() = default;

void PoliteClient::set_policy(compliance::RobotsPolicy policy) {
  impl_->policy = std::move(policy);
  double d = impl_->plan.min_delay_s;
  if (auto cd = impl_->policy.crawl_delay_for(impl_->agent_token)) d = std::max(d, *cd);
  impl_->effective_delay_s = d;
}

const std::vector<FetchLogEntry>& PoliteClient::log() const { return impl_->log; }
const std::set<std::string>& PoliteClient::seen_urls() const { return impl_->seen; }
void PoliteClient::mark_seen(const std::string& u) { impl_->seen.insert(u); }
double PoliteClient::effective_delay_s() const { return impl_->effective_delay_s; }
std::string PoliteClient::base_origin() const { return impl_->base.origin(); }
const FetchPlan& PoliteClient::plan() const { return impl_->plan; }

FetchResult PoliteClient::get(const std::string& url_or_path) {
  Impl& im = *impl_;

  url::Url target = url::resolve(im.base, url_or_path);
  if (target.host != im.base.host)
    throw ValidationError("fetcher: cross-host url '" + target.str() + "' on client for " +
                          im.base.origin());
  const std::string abs = target.str();

  FetchResult result;
  result.url = abs;
  result.fetched_at = timeutil::iso8601_utc(im.clock->now());

  if (im.seen.count(abs)) {
    result.status = FetchStatus::skipped_seen;
    im.append(abs, status_name(result.status), 0, true, 0);
    return result;
  }

  if (im.plan.respect_robots && !compliance::is_allowed(im.policy, target.path, im.agent_token)) {
    result.status = FetchStatus::skipped_disallowed;
    im.append(abs, status_name(result.status), 0, true, 0);
    return result;
  }

  if (im.plan.window && !im.plan.window->contains(im.clock->local_hour())) {
    result.status = FetchStatus::skipped_window;
    im.append(abs, status_name(result.status), 0, true, 0);
    return result;
  }

  const int budget = im.plan.max_retries;
  for (int attempt = 1; attempt <= budget; ++attempt) {
    im.wait_for_slot();
    net::HttpResponse res = im.session.get(target.path_and_query());
    // backoff doubles from the politeness delay on each transient failure
    const double backoff = im.effective_delay_s * std::pow(2.0, static_cast<double>(attempt - 1));

    result.attempt = attempt;
    result.fetched_at = timeutil::iso8601_utc(im.clock->now());

    if (res.network_error) {
      bool terminal = attempt == budget;
      im.schedule_next(terminal ? im.effective_delay_s : backoff);
      im.append(abs, "network_error", attempt, terminal, 0, res.error);
      if (terminal) {
        result.status = FetchStatus::network_error;
        return result;
      }
      continue;
    }
    if (res.status >= 500) {  // transient server-side failure
      bool terminal = attempt == budget;
      im.schedule_next(terminal ? im.effective_delay_s : backoff);
      im.append(abs, "http_error", attempt, terminal, res.status);
      if (terminal) {
        result.status = FetchStatus::http_error;
        result.http_code = res.status;
        return result;
      }
      continue;
    }
    im.schedule_next(im.effective_delay_s);
    if (res.status != 200) {  // 4xx and friends: terminal, not retried
      result.status = FetchStatus::http_error;
      result.http_code = res.status;
      im.append(abs, "http_error", attempt, true, res.status);
      return result;
    }
    result.status = FetchStatus::ok;
    result.http_code = res.status;
    result.body = std::move(res.body);
    im.seen.insert(abs);
    im.append(abs, "ok", attempt, true, res.status);
    return result;
  }
  // unreachable: budget >= 1 always returns inside the loop
  result.status = FetchStatus::network_error;
  return result;
}

FetchOutcome run_plan(PoliteClient& client, const std::vector<std::string>& urls,
                      const std::function<void(const FetchResult&)>& sink) {
  FetchOutcome out;
  for (const auto& u : urls) {
    FetchResult r = client.get(u);
    if (sink) sink(r);  // sink failure propagates; client log stays intact
    out.results.push_back(std::move(r));
  }
  return out;
}

FetchOutcome run_plan(const FetchPlan& plan, const compliance::RobotsPolicy& policy,
                      const std::string& base_url,
                      const std::function<void(const FetchResult&)>& sink,
                      std::vector<FetchLogEntry>* log_out, const timeutil::Clock* clock) {
  PoliteClient client(base_url, plan, policy, clock);
  FetchOutcome out;
  try {
    out = run_plan(client, plan.seed_urls, sink);
  } catch (...) {
    if (log_out) *log_out = client.log();
    throw;
  }
  if (log_out) *log_out = client.log();
  return out;
}

std::vector<std::string> enumerate_listings(PoliteClient& client, const SearchQuery& query,
                                            const extract::LinkRules& rules) {
  if (rules.search_url_template.empty())
    throw ValidationError("enumerate_listings: rules lack a search_url_template");
  if (rules.listing_selector.empty())
    throw ValidationError("enumerate_listings: rules lack a listing link selector");

  std::vector<std::string> listings;
  std::set<std::string> seen_listing;
  std::set<std::string> visited_pages;

  std::vector<std::string> sorts =
      query.sorts.empty() ? std::vector<std::string>{"default"} : query.sorts;
  for (const auto& sort : sorts) {
    std::string page_url = rules.search_url_template;
    page_url = str::replace_all(page_url, "{object}", query.object_type);
    page_url = str::replace_all(page_url, "{place}", query.place);
    page_url = str::replace_all(page_url, "{sort}", sort);

    while (!page_url.empty()) {
      url::Url abs = url::resolve(*url::parse(client.base_origin() + "/"), page_url);
      if (!visited_pages.insert(abs.str()).second) break;  // pagination loop guard

      FetchResult page = client.get(page_url);
      if (page.status != FetchStatus::ok || !page.body) break;

      auto links = extract::extract_links(*page.body, rules.listing_selector, page.url);
      for (auto& l : links) {
        if (seen_listing.insert(l).second) listings.push_back(std::move(l));
      }

      page_url.clear();
      if (!rules.next_selector.empty()) {
        auto next = extract::extract_links(*page.body, rules.next_selector, page.url);
        if (!next.empty()) page_url = next.front();
      }
    }
  }
  return listings;
}

}  // namespace geoharvest::fetch
