#include <doctest.h>

#include <random>

#include "mediapulse/dates.hpp"
#include "mediapulse/errors.hpp"
#include "mediapulse/store.hpp"

using namespace mediapulse;

TEST_SUITE("dates") {

TEST_CASE("civil conversions round-trip") {
  CHECK(days_from_civil({1970, 1, 1}) == 0);
  CHECK(days_from_civil({1970, 1, 2}) == 1);
  CHECK(days_from_civil({1969, 12, 31}) == -1);

  std::mt19937 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(-200000, 200000);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t days = dist(rng);
    CHECK(days_from_civil(civil_from_days(days)) == days);
  }
}

TEST_CASE("weekdays") {
  // 1970-01-01 was a Thursday; 2019-11-10 (election day) a Sunday.
  CHECK(weekday_from_days(days_from_civil({1970, 1, 1})) == 4);
  CHECK(weekday_from_days(days_from_civil({2019, 11, 10})) == 0);
  CHECK(weekday_from_days(days_from_civil({2019, 11, 1})) == 5);
}

TEST_CASE("date parse and format") {
  CHECK(parse_date("2019-11-01") == CivilDate{2019, 11, 1});
  CHECK(to_string(CivilDate{2019, 11, 1}) == "2019-11-01");
  CHECK(!parse_date("2019-13-01"));
  CHECK(!parse_date("2019-02-30"));
  CHECK(!parse_date("2019-11-1"));
  CHECK(!parse_date("2019-11-01x"));
  CHECK(parse_date("2020-02-29").has_value());
  CHECK(!parse_date("2019-02-29"));
}

TEST_CASE("iso8601") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("1970-01-02T00:00:00Z") == 86400);
  CHECK(parse_iso8601("2019-11-01T09:30:00Z") ==
        days_from_civil({2019, 11, 1}) * 86400 + 9 * 3600 + 30 * 60);
  // offsets shift back to UTC
  CHECK(parse_iso8601("2019-11-01T10:30:00+01:00") == parse_iso8601("2019-11-01T09:30:00Z"));
  CHECK(parse_iso8601("2019-11-01T08:30:00-0100") == parse_iso8601("2019-11-01T09:30:00Z"));
  CHECK(parse_iso8601("2019-11-01T09:30:00.123Z") == parse_iso8601("2019-11-01T09:30:00Z"));
  CHECK(parse_iso8601("2019-11-01") == days_from_civil({2019, 11, 1}) * 86400);
  CHECK(!parse_iso8601("not a date"));
  CHECK(!parse_iso8601("2019-11-01T25:00:00Z"));

  CHECK(format_iso8601(*parse_iso8601("2019-11-01T09:30:05Z")) == "2019-11-01T09:30:05Z");
}

TEST_CASE("rfc1123") {
  auto expected = parse_iso8601("2019-11-01T08:00:00Z");
  CHECK(parse_rfc1123("Fri, 01 Nov 2019 08:00:00 GMT") == expected);
  CHECK(parse_rfc1123("01 Nov 2019 08:00:00 GMT") == expected);
  CHECK(parse_rfc1123("Fri, 1 Nov 2019 09:00:00 +0100") == expected);
  CHECK(parse_rfc1123("Fri, 01 Nov 19 08:00:00 UT") == expected);
  CHECK(parse_rfc1123("Fri, 01 Nov 2019 08:00 GMT") == expected);
  CHECK(!parse_rfc1123("Fri, 01 Foo 2019 08:00:00 GMT"));
  CHECK(!parse_rfc1123(""));
  CHECK(!parse_rfc1123("yesterday"));
}

TEST_CASE("Europe/Madrid daylight saving boundaries") {
  auto madrid = TimeZone::from_name("Europe/Madrid");
  REQUIRE(madrid.has_value());

  // Summer: CEST = UTC+2.
  CHECK(madrid->offset_minutes(*parse_iso8601("2019-07-01T10:00:00Z")) == 120);
  CHECK(madrid->local_date(*parse_iso8601("2019-07-01T22:30:00Z")) == CivilDate{2019, 7, 2});

  // DST ended 2019-10-27 01:00 UTC.
  CHECK(madrid->offset_minutes(*parse_iso8601("2019-10-27T00:59:00Z")) == 120);
  CHECK(madrid->offset_minutes(*parse_iso8601("2019-10-27T01:00:00Z")) == 60);
  CHECK(madrid->local_date(*parse_iso8601("2019-10-26T23:30:00Z")) == CivilDate{2019, 10, 27});

  // Campaign window: CET = UTC+1; late-UTC fetches cross midnight.
  CHECK(madrid->offset_minutes(*parse_iso8601("2019-11-01T12:00:00Z")) == 60);
  CHECK(madrid->local_date(*parse_iso8601("2019-11-01T23:30:00Z")) == CivilDate{2019, 11, 2});
  CHECK(madrid->local_date(*parse_iso8601("2019-11-01T22:30:00Z")) == CivilDate{2019, 11, 1});

  // DST started 2019-03-31 01:00 UTC.
  CHECK(madrid->offset_minutes(*parse_iso8601("2019-03-31T00:59:00Z")) == 60);
  CHECK(madrid->offset_minutes(*parse_iso8601("2019-03-31T01:00:00Z")) == 120);
}

TEST_CASE("zone lookup") {
  CHECK(TimeZone::from_name("UTC").has_value());
  CHECK(TimeZone::from_name("Europe/London").has_value());
  CHECK(!TimeZone::from_name("Mars/Olympus").has_value());
  auto utc = TimeZone::from_name("UTC");
  CHECK(utc->offset_minutes(*parse_iso8601("2019-07-01T12:00:00Z")) == 0);
}

TEST_CASE("bucket policy") {
  BucketPolicy by_fetch;  // defaults: by_fetch_date, Europe/Madrid
  Timestamp fetched = *parse_iso8601("2019-11-05T10:00:00Z");
  Timestamp published = *parse_iso8601("2019-11-03T09:00:00Z");

  CHECK(bucket_date_for(fetched, published, by_fetch) == CivilDate{2019, 11, 5});

  BucketPolicy by_published{BucketMode::by_published_date_fallback_fetch, "Europe/Madrid"};
  CHECK(bucket_date_for(fetched, published, by_published) == CivilDate{2019, 11, 3});
  CHECK(bucket_date_for(fetched, std::nullopt, by_published) == CivilDate{2019, 11, 5});

  BucketPolicy bad{BucketMode::by_fetch_date, "Nowhere/Nothing"};
  CHECK_THROWS_AS(bucket_date_for(fetched, std::nullopt, bad), ConfigError);
}

TEST_CASE("next_day crosses month and year ends") {
  CHECK(next_day({2019, 11, 30}) == CivilDate{2019, 12, 1});
  CHECK(next_day({2019, 12, 31}) == CivilDate{2020, 1, 1});
  CHECK(next_day({2020, 2, 28}) == CivilDate{2020, 2, 29});
}

}  // TEST_SUITE
