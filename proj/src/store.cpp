#include "mediapulse/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "mediapulse/errors.hpp"
#include "mediapulse/io.hpp"

namespace mediapulse {

CivilDate bucket_date_for(Timestamp fetched_at, std::optional<Timestamp> published_at,
                          const BucketPolicy& policy) {
  auto zone = TimeZone::from_name(policy.timezone);
  if (!zone) throw ConfigError("unknown timezone '" + policy.timezone + "'");
  Timestamp instant = fetched_at;
  if (policy.mode == BucketMode::by_published_date_fallback_fetch && published_at) {
    instant = *published_at;
  }
  return zone->local_date(instant);
}

namespace {

// RAII append-mode file descriptor. Each record is written with a single
// write() call so a concurrent reader never observes a half line except at
// a crash-torn tail.
class AppendFile {
 public:
  AppendFile() = default;

  void open(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0) {
      throw StoreError("cannot open " + path.string() + ": " + std::strerror(errno));
    }
    path_ = path;
  }

  void append_line(const std::string& line) {
    std::string buffer = line;
    buffer.push_back('\n');
    const char* data = buffer.data();
    std::size_t remaining = buffer.size();
    while (remaining > 0) {
      ssize_t n = ::write(fd_, data, remaining);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw StoreError("write to " + path_.string() + " failed: " + std::strerror(errno));
      }
      data += n;
      remaining -= static_cast<std::size_t>(n);
    }
  }

  void sync() {
    if (fd_ >= 0) ::fdatasync(fd_);
  }

  void close() {
    if (fd_ >= 0) {
      ::fdatasync(fd_);
      ::close(fd_);
      fd_ = -1;
    }
  }

  ~AppendFile() { close(); }

  AppendFile(const AppendFile&) = delete;
  AppendFile& operator=(const AppendFile&) = delete;

 private:
  int fd_ = -1;
  std::filesystem::path path_;
};

constexpr int kFormatVersion = 1;

}  // namespace

struct Store::Impl {
  std::filesystem::path dir;
  Mode mode = Mode::read_only;
  int lock_fd = -1;

  AppendFile articles_file;
  AppendFile mentions_file;

  std::vector<ArticleRecord> articles;
  std::vector<MentionRecord> mentions;
  std::unordered_map<std::string, std::size_t> article_index;            // url -> articles[]
  std::map<std::string, std::set<CivilDate>> appearances;                // url -> days seen
  std::unordered_set<std::string> change_keys;                           // url \x1f new hash
  std::unordered_set<std::string> mention_keys;                          // url\x1fentity\x1fversion
  std::size_t torn_lines = 0;

  ~Impl() {
    articles_file.close();
    mentions_file.close();
    if (lock_fd >= 0) ::close(lock_fd);
  }

  static std::string mention_key(const MentionRecord& r) {
    return r.url + '\x1f' + r.entity_id + '\x1f' + r.lexicon_version;
  }

  void load_lines(const std::filesystem::path& path, bool mentions_file_kind);
  void apply_article_line(const nlohmann::json& record);
  void apply_mention_line(const nlohmann::json& record);
};

void Store::Impl::load_lines(const std::filesystem::path& path, bool mentions_file_kind) {
  if (!std::filesystem::exists(path)) return;
  std::string contents = read_file(path);

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string::npos) {
      // Unterminated tail: the write was interrupted and never committed.
      // Earlier lines are intact; a read-write open truncates the tail so
      // future appends start on a clean line.
      ++torn_lines;
      if (mode == Mode::read_write) {
        if (::truncate(path.c_str(), static_cast<off_t>(pos)) != 0) {
          throw StoreError("cannot heal torn tail of " + path.string() + ": " +
                           std::strerror(errno));
        }
      }
      break;
    }
    std::string_view line = std::string_view(contents).substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("t")) {
      throw StoreError("corrupt record at " + path.string() + ":" + std::to_string(line_no));
    }
    try {
      if (mentions_file_kind) {
        apply_mention_line(record);
      } else {
        apply_article_line(record);
      }
    } catch (const nlohmann::json::exception& e) {
      throw StoreError("corrupt record at " + path.string() + ":" + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
}

void Store::Impl::apply_article_line(const nlohmann::json& record) {
  std::string type = record.at("t").get<std::string>();
  if (type == "article") {
    ArticleRecord article;
    article.url = record.at("url").get<std::string>();
    article.source_id = record.at("source_id").get<std::string>();
    auto fetched = parse_iso8601(record.at("fetched_at").get<std::string>());
    if (!fetched) throw StoreError("bad fetched_at for " + article.url);
    article.fetched_at = *fetched;
    if (record.contains("published_at")) {
      article.published_at = parse_iso8601(record.at("published_at").get<std::string>());
    }
    auto bucket = parse_date(record.at("bucket_date").get<std::string>());
    if (!bucket) throw StoreError("bad bucket_date for " + article.url);
    article.bucket_date = *bucket;
    article.content_hash = record.at("content_hash").get<std::string>();
    article.title = record.value("title", "");
    article.extracted_text = record.value("text", "");
    if (article_index.count(article.url) != 0) {
      // Should not happen with a correct writer; first record wins.
      return;
    }
    article_index.emplace(article.url, articles.size());
    appearances[article.url].insert(article.bucket_date);
    articles.push_back(std::move(article));
  } else if (type == "sighting") {
    std::string url = record.at("url").get<std::string>();
    auto bucket = parse_date(record.at("bucket_date").get<std::string>());
    if (!bucket) throw StoreError("bad bucket_date in sighting of " + url);
    appearances[url].insert(*bucket);
  } else if (type == "change") {
    std::string url = record.at("url").get<std::string>();
    change_keys.insert(url + '\x1f' + record.at("content_hash").get<std::string>());
  }
  // Unknown record tags are ignored for forward compatibility.
}

void Store::Impl::apply_mention_line(const nlohmann::json& record) {
  if (record.at("t").get<std::string>() != "mention") return;
  MentionRecord mention;
  mention.url = record.at("url").get<std::string>();
  mention.entity_id = record.at("entity_id").get<std::string>();
  mention.count = record.at("count").get<std::int64_t>();
  mention.lexicon_version = record.at("lexicon_version").get<std::string>();
  if (mention.count <= 0) return;
  if (!mention_keys.insert(mention_key(mention)).second) return;
  mentions.push_back(std::move(mention));
}

Store Store::open(const std::filesystem::path& dir, Mode mode) {
  auto impl = std::make_unique<Impl>();
  impl->dir = dir;
  impl->mode = mode;

  if (mode == Mode::read_write) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw StoreError("cannot create store directory " + dir.string());
  } else if (!std::filesystem::is_directory(dir)) {
    throw StoreError("store directory " + dir.string() + " does not exist");
  }

  auto meta_path = dir / "meta";
  if (std::filesystem::exists(meta_path)) {
    nlohmann::json meta = nlohmann::json::parse(read_file(meta_path), nullptr, false);
    if (meta.is_discarded() || meta.value("format", "") != "mediapulse.store") {
      throw StoreError("unrecognized store meta file " + meta_path.string());
    }
    if (meta.value("version", 0) != kFormatVersion) {
      throw StoreError("unsupported store format version " +
                       std::to_string(meta.value("version", 0)) + " in " + dir.string());
    }
  } else if (mode == Mode::read_write) {
    nlohmann::json meta{{"format", "mediapulse.store"}, {"version", kFormatVersion}};
    write_file(meta_path, meta.dump() + "\n");
  } else {
    throw StoreError("not a store directory (missing meta): " + dir.string());
  }

  if (mode == Mode::read_write) {
    auto lock_path = dir / "store.lock";
    impl->lock_fd = ::open(lock_path.c_str(), O_WRONLY | O_CREAT, 0644);
    if (impl->lock_fd < 0) {
      throw StoreError("cannot open " + lock_path.string() + ": " + std::strerror(errno));
    }
    if (::flock(impl->lock_fd, LOCK_EX | LOCK_NB) != 0) {
      ::close(impl->lock_fd);
      impl->lock_fd = -1;
      throw StoreError("another writer holds the lock on " + dir.string());
    }
  }

  impl->load_lines(dir / "articles.ndrec", /*mentions_file_kind=*/false);
  impl->load_lines(dir / "mentions.ndrec", /*mentions_file_kind=*/true);

  if (mode == Mode::read_write) {
    impl->articles_file.open(dir / "articles.ndrec");
    impl->mentions_file.open(dir / "mentions.ndrec");
  }

  return Store(std::move(impl));
}

Store::Store(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Store::Store(Store&&) noexcept = default;
Store& Store::operator=(Store&&) noexcept = default;
Store::~Store() = default;

UpsertResult Store::upsert_article(const ArticleRecord& record) {
  auto& impl = *impl_;
  if (impl.mode != Mode::read_write) throw StoreError("store opened read-only");
  if (record.url.empty()) throw ValidationError("article record without url");

  auto it = impl.article_index.find(record.url);
  if (it == impl.article_index.end()) {
    nlohmann::json line{{"t", "article"},
                        {"url", record.url},
                        {"source_id", record.source_id},
                        {"fetched_at", format_iso8601(record.fetched_at)},
                        {"bucket_date", to_string(record.bucket_date)},
                        {"content_hash", record.content_hash},
                        {"title", record.title},
                        {"text", record.extracted_text}};
    if (record.published_at) line["published_at"] = format_iso8601(*record.published_at);
    impl.articles_file.append_line(line.dump());
    impl.article_index.emplace(record.url, impl.articles.size());
    impl.appearances[record.url].insert(record.bucket_date);
    impl.articles.push_back(record);
    return UpsertResult::inserted;
  }

  const ArticleRecord& existing = impl.articles[it->second];
  bool changed = existing.content_hash != record.content_hash;

  if (changed) {
    std::string key = record.url + '\x1f' + record.content_hash;
    if (impl.change_keys.insert(key).second) {
      nlohmann::json line{{"t", "change"},
                          {"url", record.url},
                          {"content_hash", record.content_hash},
                          {"fetched_at", format_iso8601(record.fetched_at)}};
      impl.articles_file.append_line(line.dump());
    }
  }

  auto& days = impl.appearances[record.url];
  if (days.insert(record.bucket_date).second) {
    nlohmann::json line{{"t", "sighting"},
                        {"url", record.url},
                        {"fetched_at", format_iso8601(record.fetched_at)},
                        {"bucket_date", to_string(record.bucket_date)}};
    impl.articles_file.append_line(line.dump());
  }

  return changed ? UpsertResult::duplicate_content_changed : UpsertResult::duplicate_unchanged;
}

std::size_t Store::append_mentions(const std::vector<MentionRecord>& records) {
  auto& impl = *impl_;
  if (impl.mode != Mode::read_write) throw StoreError("store opened read-only");

  // Validate the whole batch before touching the file.
  for (const auto& record : records) {
    if (record.count < 0) throw ValidationError("negative mention count for " + record.url);
    if (impl.article_index.find(record.url) == impl.article_index.end()) {
      throw ReferentialError("mention references unknown article URL '" + record.url + "'");
    }
  }

  std::size_t appended = 0;
  for (const auto& record : records) {
    if (record.count == 0) continue;  // zero-count records are never stored
    if (impl.mention_keys.count(Impl::mention_key(record)) != 0) continue;
    nlohmann::json line{{"t", "mention"},
                        {"url", record.url},
                        {"entity_id", record.entity_id},
                        {"count", record.count},
                        {"lexicon_version", record.lexicon_version}};
    impl.mentions_file.append_line(line.dump());
    impl.mention_keys.insert(Impl::mention_key(record));
    impl.mentions.push_back(record);
    ++appended;
  }
  if (appended > 0) impl.mentions_file.sync();
  return appended;
}

std::vector<JoinedMention> Store::query_range(CivilDate from, CivilDate to,
                                              const QueryOptions& options) const {
  if (to < from) {
    throw ArgumentError("inverted date range " + to_string(from) + " .. " + to_string(to));
  }
  if (options.kind && options.lexicon == nullptr) {
    throw ArgumentError("kind filter requires a lexicon");
  }

  const auto& impl = *impl_;
  std::vector<JoinedMention> rows;
  for (const auto& mention : impl.mentions) {
    if (options.lexicon_version && mention.lexicon_version != *options.lexicon_version) continue;
    if (options.kind) {
      const Entity* entity = options.lexicon->find(mention.entity_id);
      if (entity == nullptr || entity->kind != *options.kind) continue;
    }
    const ArticleRecord& article = impl.articles[impl.article_index.at(mention.url)];

    auto emit = [&](CivilDate day) {
      if (day < from || to < day) return;
      rows.push_back(JoinedMention{day, mention.url, article.source_id, mention.entity_id,
                                   mention.count, mention.lexicon_version});
    };
    if (options.count_reappearances) {
      for (CivilDate day : impl.appearances.at(mention.url)) emit(day);
    } else {
      emit(article.bucket_date);
    }
  }

  std::sort(rows.begin(), rows.end(), [](const JoinedMention& a, const JoinedMention& b) {
    if (a.bucket_date != b.bucket_date) return a.bucket_date < b.bucket_date;
    if (a.url != b.url) return a.url < b.url;
    return a.entity_id < b.entity_id;
  });
  return rows;
}

const std::vector<ArticleRecord>& Store::articles() const { return impl_->articles; }
const std::vector<MentionRecord>& Store::mentions() const { return impl_->mentions; }

const ArticleRecord* Store::find_article(const std::string& url) const {
  auto it = impl_->article_index.find(url);
  return (it == impl_->article_index.end()) ? nullptr : &impl_->articles[it->second];
}

const std::set<CivilDate>* Store::appearance_dates(const std::string& url) const {
  auto it = impl_->appearances.find(url);
  return (it == impl_->appearances.end()) ? nullptr : &it->second;
}

std::size_t Store::torn_lines_skipped() const { return impl_->torn_lines; }

}  // namespace mediapulse
