#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace geoharvest::timeutil {

using SysClock = std::chrono::system_clock;

std::string iso8601_utc(SysClock::time_point tp);

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (and a trailing ".sss" fraction, ignored).
std::optional<SysClock::time_point> parse_iso8601(const std::string& s);

// "YYYY-MM-DD" in UTC.
std::string utc_date(SysClock::time_point tp);

// Days since epoch in UTC, for gap-day arithmetic.
int64_t utc_day_number(SysClock::time_point tp);

// Clock abstraction; pipelines with a configured fixed time use FixedClock so
// that rerunning a stage yields byte-identical artifacts.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual SysClock::time_point now() const = 0;
  virtual int local_hour() const = 0;
};

class SystemClock final : public Clock {
 public:
  SysClock::time_point now() const override { return SysClock::now(); }
  int local_hour() const override;
};

class FixedClock final : public Clock {
 public:
  explicit FixedClock(SysClock::time_point tp) : tp_(tp) {}
  SysClock::time_point now() const override { return tp_; }
  int local_hour() const override;

 private:
  SysClock::time_point tp_;
};

}  // namespace geoharvest::timeutil
