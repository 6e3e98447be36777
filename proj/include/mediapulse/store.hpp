#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mediapulse/dates.hpp"
#include "mediapulse/lexicon.hpp"

namespace mediapulse {

// Which calendar day an article is tallied under.
enum class BucketMode { by_fetch_date, by_published_date_fallback_fetch };

struct BucketPolicy {
  BucketMode mode = BucketMode::by_fetch_date;
  std::string timezone = "Europe/Madrid";
};

// Applies the policy. Throws ConfigError for an unknown timezone name.
CivilDate bucket_date_for(Timestamp fetched_at, std::optional<Timestamp> published_at,
                          const BucketPolicy& policy);

struct ArticleRecord {
  std::string url;  // primary key
  std::string source_id;
  Timestamp fetched_at = 0;
  std::optional<Timestamp> published_at;
  CivilDate bucket_date;
  std::string content_hash;
  std::string title;
  // The text the scanner runs over. Persisted so lexicon edits can be
  // re-scanned without re-crawling.
  std::string extracted_text;
};

struct MentionRecord {
  std::string url;  // must reference a stored article
  std::string entity_id;
  std::int64_t count = 0;
  std::string lexicon_version;
};

enum class UpsertResult { inserted, duplicate_unchanged, duplicate_content_changed };

// A mention joined with its article, as returned by Store::query_range.
struct JoinedMention {
  CivilDate bucket_date;
  std::string url;
  std::string source_id;
  std::string entity_id;
  std::int64_t count = 0;
  std::string lexicon_version;
};

struct QueryOptions {
  // Restrict to entities of one kind; requires `lexicon`.
  std::optional<EntityKind> kind;
  const Lexicon* lexicon = nullptr;
  // Restrict to records produced by one lexicon version.
  std::optional<std::string> lexicon_version;
  // Emit one row per (article, appearance day) instead of one per article,
  // replaying re-sightings recorded by repeated crawls.
  bool count_reappearances = false;
};

// Append-only article/mention store:
//
//   <dir>/articles.ndrec   article, sighting and change records
//   <dir>/mentions.ndrec   mention records
//   <dir>/store.lock       writer exclusion (flock)
//   <dir>/meta             format version
//
// One JSON object per line, self-describing via a "t" tag. Writers append
// whole lines only, so a crash can at worst leave a torn final line, which
// readers skip. Single writer at a time; readers take no lock and tolerate
// concurrent appends.
class Store {
 public:
  enum class Mode { read_write, read_only };

  // Opens (and for read_write, creates) a store directory. Throws StoreError
  // when the format version is unknown, the directory is unusable, or
  // another writer holds the lock.
  static Store open(const std::filesystem::path& dir, Mode mode);

  Store(Store&&) noexcept;
  Store& operator=(Store&&) noexcept;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  ~Store();

  // First sight of a URL inserts. A re-crawl with identical content is a
  // no-op apart from recording a sighting when the article reappears on a
  // new bucket day. Changed content keeps the original and logs the new
  // hash. Replaying identical input is byte-stable.
  UpsertResult upsert_article(const ArticleRecord& record);

  // Appends records not yet present under their (url, entity_id,
  // lexicon_version) key. Zero counts are dropped. Throws ReferentialError
  // (before writing anything) when a URL is unknown.
  std::size_t append_mentions(const std::vector<MentionRecord>& records);

  // Mentions with bucket_date in [from, to], stable-ordered by
  // (bucket_date, url, entity_id). Throws ArgumentError when from > to.
  std::vector<JoinedMention> query_range(CivilDate from, CivilDate to,
                                         const QueryOptions& options = {}) const;

  const std::vector<ArticleRecord>& articles() const;  // insertion order
  const std::vector<MentionRecord>& mentions() const;  // insertion order
  const ArticleRecord* find_article(const std::string& url) const;
  // Distinct bucket days the URL was seen on (first crawl plus sightings).
  const std::set<CivilDate>* appearance_dates(const std::string& url) const;

  std::size_t torn_lines_skipped() const;

 private:
  struct Impl;
  explicit Store(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace mediapulse
