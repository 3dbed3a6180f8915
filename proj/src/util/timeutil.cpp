#include "geoharvest/util/timeutil.hpp"

#include <cstdio>
#include <ctime>

namespace geoharvest::timeutil {

std::string iso8601_utc(SysClock::time_point tp) {
  std::time_t t = SysClock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::optional<SysClock::time_point> parse_iso8601(const std::string& s) {
  std::tm tm{};
  int y, mo, d, h, mi, se;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &se) != 6)
    return std::nullopt;
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = se;
  std::time_t t = timegm(&tm);
  if (t == static_cast<std::time_t>(-1)) return std::nullopt;
  return SysClock::from_time_t(t);
}

std::string utc_date(SysClock::time_point tp) { return iso8601_utc(tp).substr(0, 10); }

int64_t utc_day_number(SysClock::time_point tp) {
  return std::chrono::duration_cast<std::chrono::hours>(tp.time_since_epoch()).count() / 24;
}

int SystemClock::local_hour() const {
  std::time_t t = SysClock::to_time_t(now());
  std::tm tm{};
  localtime_r(&t, &tm);
  return tm.tm_hour;
}

int FixedClock::local_hour() const {
  std::time_t t = SysClock::to_time_t(tp_);
  std::tm tm{};
  localtime_r(&t, &tm);
  return tm.tm_hour;
}

}  // namespace geoharvest::timeutil
