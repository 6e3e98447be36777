#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mediapulse {

// Calendar date in the proleptic Gregorian calendar.
struct CivilDate {
  int year = 0;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend auto operator<=>(const CivilDate&, const CivilDate&) = default;
};

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

// Days since 1970-01-01 for a civil date (negative before the epoch).
std::int64_t days_from_civil(CivilDate date);

// Inverse of days_from_civil.
CivilDate civil_from_days(std::int64_t days);

// 0 = Sunday ... 6 = Saturday.
int weekday_from_days(std::int64_t days);

CivilDate next_day(CivilDate date);

// "YYYY-MM-DD". Rejects out-of-range components.
std::optional<CivilDate> parse_date(std::string_view text);
std::string to_string(CivilDate date);

// "YYYY-MM-DDTHH:MM:SSZ", with optional fractional seconds and "+HH:MM" /
// "+HHMM" offsets. A bare date parses as midnight UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);
std::string format_iso8601(Timestamp ts);

// RFC 1123 / RFC 822 datetimes as used in RSS pubDate ("Fri, 01 Nov 2019
// 08:00:00 GMT", numeric offsets, optional weekday).
std::optional<Timestamp> parse_rfc1123(std::string_view text);

// Minimal named-zone support: fixed base offset plus the EU daylight-saving
// rule (last Sunday of March 01:00 UTC to last Sunday of October 01:00 UTC).
// Enough to bucket timestamps under the zones this tool is pointed at; no
// external tz database is consulted.
class TimeZone {
 public:
  // Known names: UTC, Europe/Madrid, Europe/London, Europe/Paris,
  // Europe/Berlin, Europe/Lisbon. Unknown names -> nullopt.
  static std::optional<TimeZone> from_name(std::string_view name);

  const std::string& name() const { return name_; }

  // UTC offset in minutes at the given instant.
  int offset_minutes(Timestamp ts) const;

  // Civil date of the instant in this zone.
  CivilDate local_date(Timestamp ts) const;

 private:
  TimeZone(std::string name, int base_offset_minutes, bool eu_dst)
      : name_(std::move(name)), base_offset_minutes_(base_offset_minutes), eu_dst_(eu_dst) {}

  std::string name_;
  int base_offset_minutes_ = 0;
  bool eu_dst_ = false;
};

}  // namespace mediapulse
