#include "mediapulse/dates.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace mediapulse {

namespace {

bool is_leap(int year) {
  return year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
}

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[static_cast<std::size_t>(month - 1)];
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return (a >= 0) ? a / b : -((-a + b - 1) / b);
}

bool valid_date(CivilDate d) {
  return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

// Reads exactly `width` digits at `pos`, advancing it.
bool read_digits(std::string_view s, std::size_t& pos, int width, int& out) {
  if (pos + static_cast<std::size_t>(width) > s.size()) return false;
  int value = 0;
  for (int i = 0; i < width; ++i) {
    char c = s[pos + static_cast<std::size_t>(i)];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  pos += static_cast<std::size_t>(width);
  out = value;
  return true;
}

std::int64_t last_sunday_of(int year, int month) {
  std::int64_t last = days_from_civil({year, month, days_in_month(year, month)});
  return last - weekday_from_days(last);
}

}  // namespace

std::int64_t days_from_civil(CivilDate date) {
  // Howard Hinnant's chrono-compatible civil calendar algorithm.
  std::int64_t y = date.year;
  const int m = date.month;
  const int d = date.day;
  y -= m <= 2;
  const std::int64_t era = floor_div(y, 400);
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
  days += 719468;
  const std::int64_t era = floor_div(days, 146097);
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int weekday_from_days(std::int64_t days) {
  // 1970-01-01 was a Thursday.
  return static_cast<int>(((days % 7) + 7 + 4) % 7);
}

CivilDate next_day(CivilDate date) {
  return civil_from_days(days_from_civil(date) + 1);
}

std::optional<CivilDate> parse_date(std::string_view text) {
  std::size_t pos = 0;
  int y = 0, m = 0, d = 0;
  if (!read_digits(text, pos, 4, y)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, m)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, d)) return std::nullopt;
  if (pos != text.size()) return std::nullopt;
  CivilDate date{y, m, d};
  if (!valid_date(date)) return std::nullopt;
  return date;
}

std::string to_string(CivilDate date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
  return buf;
}

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0;
  if (!read_digits(text, pos, 4, y)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, mo)) return std::nullopt;
  if (pos >= text.size() || text[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, d)) return std::nullopt;
  CivilDate date{y, mo, d};
  if (!valid_date(date)) return std::nullopt;

  int h = 0, mi = 0, s = 0;
  int offset_minutes = 0;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_digits(text, pos, 2, h)) return std::nullopt;
    if (pos >= text.size() || text[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_digits(text, pos, 2, mi)) return std::nullopt;
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      if (!read_digits(text, pos, 2, s)) return std::nullopt;
    }
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t frac_start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == frac_start) return std::nullopt;
    }
    if (pos < text.size()) {
      char c = text[pos];
      if (c == 'Z' || c == 'z') {
        ++pos;
      } else if (c == '+' || c == '-') {
        int sign = (c == '-') ? -1 : 1;
        ++pos;
        int oh = 0, om = 0;
        if (!read_digits(text, pos, 2, oh)) return std::nullopt;
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (pos < text.size()) {
          if (!read_digits(text, pos, 2, om)) return std::nullopt;
        }
        offset_minutes = sign * (oh * 60 + om);
      } else {
        return std::nullopt;
      }
    }
    if (pos != text.size()) return std::nullopt;
    if (h > 23 || mi > 59 || s > 60) return std::nullopt;
  }

  std::int64_t secs = days_from_civil(date) * 86400 + h * 3600 + mi * 60 + s;
  return secs - static_cast<std::int64_t>(offset_minutes) * 60;
}

std::string format_iso8601(Timestamp ts) {
  std::int64_t days = floor_div(ts, 86400);
  std::int64_t rem = ts - days * 86400;
  CivilDate date = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", date.year, date.month,
                date.day, static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::optional<Timestamp> parse_rfc1123(std::string_view text) {
  // Accepts "[Www, ]D Mon YYYY HH:MM[:SS] ZONE" where ZONE is GMT/UT/UTC/Z
  // or a +/-HHMM numeric offset.
  static constexpr std::array<std::string_view, 12> kMonths = {
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};

  auto skip_ws = [&](std::size_t& p) {
    while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
  };

  std::size_t pos = 0;
  skip_ws(pos);
  std::size_t comma = text.find(',');
  if (comma != std::string_view::npos && comma < 12) pos = comma + 1;
  skip_ws(pos);

  int day = 0;
  std::size_t day_start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    day = day * 10 + (text[pos] - '0');
    ++pos;
  }
  if (pos == day_start || pos - day_start > 2) return std::nullopt;
  skip_ws(pos);

  if (pos + 3 > text.size()) return std::nullopt;
  int month = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    std::string_view m = text.substr(pos, 3);
    char a = static_cast<char>(std::tolower(static_cast<unsigned char>(m[0])));
    char b = static_cast<char>(std::tolower(static_cast<unsigned char>(m[1])));
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(m[2])));
    if (a == kMonths[i][0] && b == kMonths[i][1] && c == kMonths[i][2]) {
      month = static_cast<int>(i) + 1;
      break;
    }
  }
  if (month == 0) return std::nullopt;
  pos += 3;
  skip_ws(pos);

  int year = 0;
  std::size_t year_start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    year = year * 10 + (text[pos] - '0');
    ++pos;
  }
  std::size_t year_digits = pos - year_start;
  if (year_digits == 2) {
    year += (year < 70) ? 2000 : 1900;
  } else if (year_digits != 4) {
    return std::nullopt;
  }
  skip_ws(pos);

  int h = 0, mi = 0, s = 0;
  if (!read_digits(text, pos, 2, h)) return std::nullopt;
  if (pos >= text.size() || text[pos] != ':') return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, mi)) return std::nullopt;
  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    if (!read_digits(text, pos, 2, s)) return std::nullopt;
  }
  skip_ws(pos);

  int offset_minutes = 0;
  if (pos < text.size()) {
    char c = text[pos];
    if (c == '+' || c == '-') {
      int sign = (c == '-') ? -1 : 1;
      ++pos;
      int oh = 0, om = 0;
      if (!read_digits(text, pos, 2, oh)) return std::nullopt;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (!read_digits(text, pos, 2, om)) return std::nullopt;
      offset_minutes = sign * (oh * 60 + om);
    } else {
      std::size_t zone_end = pos;
      while (zone_end < text.size() && std::isalpha(static_cast<unsigned char>(text[zone_end])))
        ++zone_end;
      std::string zone(text.substr(pos, zone_end - pos));
      for (char& ch : zone) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (zone != "GMT" && zone != "UT" && zone != "UTC" && zone != "Z") return std::nullopt;
      pos = zone_end;
    }
  }
  skip_ws(pos);
  if (pos != text.size()) return std::nullopt;

  CivilDate date{year, month, day};
  if (!valid_date(date) || h > 23 || mi > 59 || s > 60) return std::nullopt;
  std::int64_t secs = days_from_civil(date) * 86400 + h * 3600 + mi * 60 + s;
  return secs - static_cast<std::int64_t>(offset_minutes) * 60;
}

std::optional<TimeZone> TimeZone::from_name(std::string_view name) {
  if (name == "UTC") return TimeZone{"UTC", 0, false};
  if (name == "Europe/Madrid") return TimeZone{"Europe/Madrid", 60, true};
  if (name == "Europe/London") return TimeZone{"Europe/London", 0, true};
  if (name == "Europe/Paris") return TimeZone{"Europe/Paris", 60, true};
  if (name == "Europe/Berlin") return TimeZone{"Europe/Berlin", 60, true};
  if (name == "Europe/Lisbon") return TimeZone{"Europe/Lisbon", 0, true};
  return std::nullopt;
}

int TimeZone::offset_minutes(Timestamp ts) const {
  if (!eu_dst_) return base_offset_minutes_;
  int year = civil_from_days(floor_div(ts, 86400)).year;
  Timestamp dst_start = last_sunday_of(year, 3) * 86400 + 3600;
  Timestamp dst_end = last_sunday_of(year, 10) * 86400 + 3600;
  bool dst = ts >= dst_start && ts < dst_end;
  return base_offset_minutes_ + (dst ? 60 : 0);
}

CivilDate TimeZone::local_date(Timestamp ts) const {
  std::int64_t local = ts + static_cast<std::int64_t>(offset_minutes(ts)) * 60;
  return civil_from_days(floor_div(local, 86400));
}

}  // namespace mediapulse
