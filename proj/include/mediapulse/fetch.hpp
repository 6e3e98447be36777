#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mediapulse/dates.hpp"
#include "mediapulse/feed.hpp"

namespace mediapulse {

struct FetchPolicy {
  std::chrono::milliseconds timeout{10000};
  int max_retries = 2;
  // Wait before retry attempt i; the last entry repeats when attempts exceed
  // the schedule length.
  std::vector<std::chrono::milliseconds> retry_backoff{std::chrono::milliseconds{500},
                                                       std::chrono::milliseconds{1500}};
  std::chrono::milliseconds per_host_delay{2000};
  std::size_t max_body_bytes = 8 * 1024 * 1024;
  std::string user_agent = "mediapulse/0.1";
};

struct FetchResponse {
  std::string final_url;     // after redirects
  int status = 0;
  std::string content_type;  // lowercased media type without parameters
  std::string body;
  Timestamp fetched_at = 0;  // request completion; fixture transports replay
                             // the recorded value
};

// The only nondeterministic boundary of the pipeline. Everything downstream
// of a Transport produces identical results for identical bodies.
class Transport {
 public:
  virtual ~Transport() = default;
  // Throws FetchError on failure; never returns a non-2xx response.
  virtual FetchResponse get(const std::string& url) = 0;
};

// HTTP transport: redirects (up to 5 hops), retries with the policy's
// backoff schedule, a per-host politeness delay, and a body size cap.
// Thread safe; requests to one host are always separated by the delay.
class LiveTransport : public Transport {
 public:
  explicit LiveTransport(FetchPolicy policy);
  FetchResponse get(const std::string& url) override;

 private:
  void politeness_wait(const std::string& host_port);

  FetchPolicy policy_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_allowed_;
};

// Offline transport over a recorded crawl corpus:
//
//   <dir>/<source_id>/manifest.json
//   <dir>/<source_id>/feed.xml, <url-hash>.html ...
//
// Each manifest maps URLs to body files, with the content type and the
// recorded fetch time per article. Replaying a fixture corpus is fully
// deterministic.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(const std::filesystem::path& fixture_dir);
  FetchResponse get(const std::string& url) override;

 private:
  struct Entry {
    std::filesystem::path file;
    std::string content_type;
    Timestamp fetched_at = 0;
  };
  std::map<std::string, Entry> entries_;
};

// A fetched article page with its extracted text.
struct ArticleDocument {
  std::string url;  // final URL, the identity used for dedup
  std::string source_id;
  Timestamp fetched_at = 0;
  std::optional<Timestamp> published_at;  // carried over from the feed item
  std::string raw_html;
  std::string extracted_text;
  std::string content_hash;  // digest of extracted_text
  std::string title;
};

// Fetches a feed body. Fetch failures propagate as FetchError.
FetchResponse fetch_feed(const FeedSource& source, Transport& transport);

// Dereferences an item link and extracts the page text. Non-HTML content
// types raise FetchError{content_type}.
ArticleDocument fetch_article(const FeedItem& item, Transport& transport);

// Builds the document the same way fetch_article does, but from the feed
// entry itself (title + summary); supports the summaries-only crawl mode.
ArticleDocument document_from_summary(const FeedItem& item, Timestamp fetched_at);

}  // namespace mediapulse
