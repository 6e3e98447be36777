#include <doctest.h>

#include <random>

#include "mediapulse/errors.hpp"
#include "mediapulse/io.hpp"
#include "mediapulse/store.hpp"
#include "support/test_util.hpp"

using namespace mediapulse;
using mediapulse::test::TempDir;

namespace {

ArticleRecord make_article(const std::string& url, const std::string& date,
                           const std::string& hash = "h1", const std::string& source = "src") {
  ArticleRecord record;
  record.url = url;
  record.source_id = source;
  record.fetched_at = *parse_iso8601(date + "T10:00:00Z");
  record.bucket_date = *parse_date(date);
  record.content_hash = hash;
  record.title = "t";
  record.extracted_text = "texto de " + url;
  return record;
}

std::string store_bytes(const std::filesystem::path& dir) {
  std::string all;
  for (const char* name : {"articles.ndrec", "mentions.ndrec"}) {
    auto path = dir / name;
    if (std::filesystem::exists(path)) all += read_file(path);
    all += '\x1e';
  }
  return all;
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("insert, idempotent re-upsert, content change") {
  TempDir dir;
  {
    Store store = Store::open(dir.path(), Store::Mode::read_write);
    auto record = make_article("http://x.test/a", "2019-11-01");

    CHECK(store.upsert_article(record) == UpsertResult::inserted);
    std::string after_insert = store_bytes(dir.path());

    // identical re-crawl: byte-identical store
    CHECK(store.upsert_article(record) == UpsertResult::duplicate_unchanged);
    CHECK(store_bytes(dir.path()) == after_insert);

    // same content, later day: a sighting is recorded once
    auto later = make_article("http://x.test/a", "2019-11-03");
    CHECK(store.upsert_article(later) == UpsertResult::duplicate_unchanged);
    std::string after_sighting = store_bytes(dir.path());
    CHECK(after_sighting != after_insert);
    CHECK(store.upsert_article(later) == UpsertResult::duplicate_unchanged);
    CHECK(store_bytes(dir.path()) == after_sighting);
    REQUIRE(store.appearance_dates("http://x.test/a") != nullptr);
    CHECK(store.appearance_dates("http://x.test/a")->size() == 2);

    // edited body: original kept, change logged once
    auto edited = make_article("http://x.test/a", "2019-11-03", "h2");
    CHECK(store.upsert_article(edited) == UpsertResult::duplicate_content_changed);
    CHECK(store.find_article("http://x.test/a")->content_hash == "h1");
    std::string after_change = store_bytes(dir.path());
    CHECK(store.upsert_article(edited) == UpsertResult::duplicate_content_changed);
    CHECK(store_bytes(dir.path()) == after_change);
  }
}

TEST_CASE("append_mentions: idempotent, zero-dropping, referential") {
  TempDir dir;
  Store store = Store::open(dir.path(), Store::Mode::read_write);
  store.upsert_article(make_article("http://x.test/a", "2019-11-01"));

  std::vector<MentionRecord> records = {
      {"http://x.test/a", "vox", 2, "v1"},
      {"http://x.test/a", "pp", 1, "v1"},
      {"http://x.test/a", "psoe", 1, "v1"},
  };
  CHECK(store.append_mentions(records) == 3);
  CHECK(store.append_mentions(records) == 0);  // re-append is a no-op

  CHECK(store.append_mentions({{"http://x.test/a", "cs", 0, "v1"}}) == 0);  // zero dropped

  std::string before = store_bytes(dir.path());
  CHECK_THROWS_AS(store.append_mentions({{"http://x.test/a", "vox", 1, "v2"},
                                         {"http://unknown.test/b", "vox", 1, "v2"}}),
                  ReferentialError);
  CHECK(store_bytes(dir.path()) == before);  // nothing written on validation failure

  // same key, different lexicon version: coexists
  CHECK(store.append_mentions({{"http://x.test/a", "vox", 3, "v2"}}) == 1);
}

TEST_CASE("reopen sees identical state") {
  TempDir dir;
  std::vector<JoinedMention> first_query;
  {
    Store store = Store::open(dir.path(), Store::Mode::read_write);
    store.upsert_article(make_article("http://x.test/a", "2019-11-01"));
    store.upsert_article(make_article("http://x.test/b", "2019-11-02", "hb"));
    store.append_mentions({{"http://x.test/a", "vox", 2, "v1"},
                           {"http://x.test/b", "pp", 1, "v1"}});
    first_query = store.query_range({2019, 11, 1}, {2019, 11, 10});
  }
  Store reopened = Store::open(dir.path(), Store::Mode::read_only);
  auto second_query = reopened.query_range({2019, 11, 1}, {2019, 11, 10});
  REQUIRE(second_query.size() == first_query.size());
  for (std::size_t i = 0; i < first_query.size(); ++i) {
    CHECK(second_query[i].url == first_query[i].url);
    CHECK(second_query[i].entity_id == first_query[i].entity_id);
    CHECK(second_query[i].count == first_query[i].count);
    CHECK(second_query[i].bucket_date == first_query[i].bucket_date);
  }
  CHECK(reopened.articles().size() == 2);
}

TEST_CASE("query_range agrees with a brute-force filter") {
  TempDir dir;
  Store store = Store::open(dir.path(), Store::Mode::read_write);

  std::mt19937 rng(11);
  const char* entities[] = {"vox", "pp", "psoe", "cs", "up"};
  std::vector<MentionRecord> all;
  for (int day = 1; day <= 10; ++day) {
    for (int k = 0; k < 3; ++k) {
      char date[16];
      std::snprintf(date, sizeof(date), "2019-11-%02d", day);
      std::string url = "http://x.test/" + std::to_string(day) + "/" + std::to_string(k);
      store.upsert_article(make_article(url, date, "h" + url));
      MentionRecord record{url, entities[rng() % 5],
                           static_cast<std::int64_t>(1 + rng() % 4), "v1"};
      store.append_mentions({record});
      all.push_back(record);
    }
  }

  auto rows = store.query_range({2019, 11, 3}, {2019, 11, 5});
  // oracle: full scan + date filter
  std::size_t expected = 0;
  for (const auto& record : all) {
    const auto* article = store.find_article(record.url);
    if (!(article->bucket_date < CivilDate{2019, 11, 3}) &&
        !(CivilDate{2019, 11, 5} < article->bucket_date)) {
      ++expected;
    }
  }
  CHECK(rows.size() == expected);
  CHECK(expected == 9);

  // stable order: (bucket_date, url, entity_id)
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto key = [](const JoinedMention& r) {
      return std::make_tuple(r.bucket_date, r.url, r.entity_id);
    };
    CHECK(key(rows[i - 1]) <= key(rows[i]));
  }

  // conservation over the full span
  auto everything = store.query_range({2019, 11, 1}, {2019, 11, 10});
  std::int64_t total_stored = 0;
  for (const auto& row : everything) total_stored += row.count;
  std::int64_t total_appended = 0;
  for (const auto& record : all) total_appended += record.count;
  CHECK(total_stored == total_appended);

  CHECK(store.query_range({2019, 11, 4}, {2019, 11, 4}).size() == 3);
  CHECK(store.query_range({2020, 1, 1}, {2020, 1, 2}).empty());
  CHECK_THROWS_AS(store.query_range({2019, 11, 5}, {2019, 11, 3}), ArgumentError);
}

TEST_CASE("query filters: lexicon kind and version") {
  TempDir dir;
  Store store = Store::open(dir.path(), Store::Mode::read_write);
  store.upsert_article(make_article("http://x.test/a", "2019-11-01"));
  store.append_mentions({{"http://x.test/a", "vox", 1, "v1"},
                         {"http://x.test/a", "abascal", 2, "v1"},
                         {"http://x.test/a", "vox", 5, "v2"}});

  Lexicon lexicon = load_lexicon(
      "[entity]\nid = vox\nkind = party\ncounterpart = abascal\nalias = Vox\n"
      "[entity]\nid = abascal\nkind = leader\ncounterpart = vox\nalias = Abascal\n");

  QueryOptions options;
  options.kind = EntityKind::party;
  options.lexicon = &lexicon;
  auto parties = store.query_range({2019, 11, 1}, {2019, 11, 1}, options);
  REQUIRE(parties.size() == 2);  // vox under v1 and v2
  CHECK(parties[0].entity_id == "vox");

  options.lexicon_version = "v1";
  auto v1_parties = store.query_range({2019, 11, 1}, {2019, 11, 1}, options);
  REQUIRE(v1_parties.size() == 1);
  CHECK(v1_parties[0].count == 1);

  QueryOptions bad;
  bad.kind = EntityKind::party;  // no lexicon
  CHECK_THROWS_AS(store.query_range({2019, 11, 1}, {2019, 11, 1}, bad), ArgumentError);
}

TEST_CASE("count_reappearances expands rows over sighting days") {
  TempDir dir;
  Store store = Store::open(dir.path(), Store::Mode::read_write);
  store.upsert_article(make_article("http://x.test/a", "2019-11-01"));
  store.upsert_article(make_article("http://x.test/a", "2019-11-02"));  // sighting
  store.append_mentions({{"http://x.test/a", "vox", 2, "v1"}});

  CHECK(store.query_range({2019, 11, 1}, {2019, 11, 10}).size() == 1);

  QueryOptions options;
  options.count_reappearances = true;
  auto rows = store.query_range({2019, 11, 1}, {2019, 11, 10}, options);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].bucket_date == CivilDate{2019, 11, 1});
  CHECK(rows[1].bucket_date == CivilDate{2019, 11, 2});
  CHECK(rows[0].count == rows[1].count);
}

TEST_CASE("single writer, concurrent reader") {
  TempDir dir;
  Store writer = Store::open(dir.path(), Store::Mode::read_write);
  CHECK_THROWS_AS(Store::open(dir.path(), Store::Mode::read_write), StoreError);
  Store reader = Store::open(dir.path(), Store::Mode::read_only);  // fine
  CHECK(reader.articles().empty());
  CHECK_THROWS_AS(reader.upsert_article(make_article("http://x.test/a", "2019-11-01")),
                  StoreError);
}

TEST_CASE("torn tail is skipped by readers and healed by the next writer") {
  TempDir dir;
  {
    Store store = Store::open(dir.path(), Store::Mode::read_write);
    store.upsert_article(make_article("http://x.test/a", "2019-11-01"));
  }
  // simulate a crash mid-write
  {
    std::string contents = read_file(dir.path() / "articles.ndrec");
    contents += "{\"t\":\"article\",\"url\":\"http://x.test/torn";
    write_file(dir.path() / "articles.ndrec", contents);
  }
  {
    Store reader = Store::open(dir.path(), Store::Mode::read_only);
    CHECK(reader.torn_lines_skipped() == 1);
    CHECK(reader.articles().size() == 1);
  }
  {
    Store writer = Store::open(dir.path(), Store::Mode::read_write);
    CHECK(writer.torn_lines_skipped() == 1);
    writer.upsert_article(make_article("http://x.test/b", "2019-11-02", "hb"));
  }
  Store verify = Store::open(dir.path(), Store::Mode::read_only);
  CHECK(verify.torn_lines_skipped() == 0);  // healed
  CHECK(verify.articles().size() == 2);
}

TEST_CASE("complete corrupt line is a loud error") {
  TempDir dir;
  {
    Store store = Store::open(dir.path(), Store::Mode::read_write);
    store.upsert_article(make_article("http://x.test/a", "2019-11-01"));
  }
  std::string contents = read_file(dir.path() / "articles.ndrec");
  write_file(dir.path() / "articles.ndrec", "this is not json\n" + contents);
  CHECK_THROWS_AS(Store::open(dir.path(), Store::Mode::read_only), StoreError);
}

TEST_CASE("format version gate") {
  TempDir dir;
  { Store store = Store::open(dir.path(), Store::Mode::read_write); }
  write_file(dir.path() / "meta", "{\"format\":\"mediapulse.store\",\"version\":99}\n");
  CHECK_THROWS_AS(Store::open(dir.path(), Store::Mode::read_only), StoreError);
  write_file(dir.path() / "meta", "something else\n");
  CHECK_THROWS_AS(Store::open(dir.path(), Store::Mode::read_only), StoreError);

  // read-only open of a directory that was never a store
  TempDir fresh;
  CHECK_THROWS_AS(Store::open(fresh.path(), Store::Mode::read_only), StoreError);
  CHECK_THROWS_AS(Store::open(fresh.path() / "missing", Store::Mode::read_only), StoreError);
}

}  // TEST_SUITE
