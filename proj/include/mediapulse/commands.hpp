#pragma once

#include <iosfwd>
#include <string>

#include "mediapulse/fetch.hpp"
#include "mediapulse/run_config.hpp"

namespace mediapulse {

struct CrawlSummary {
  std::size_t sources_total = 0;
  std::size_t feeds_polled = 0;  // sources whose feed fetched and parsed
  std::size_t items_seen = 0;
  std::size_t articles_fetched = 0;
  std::size_t inserted = 0;
  std::size_t duplicates_unchanged = 0;
  std::size_t content_changed = 0;
  std::size_t errors = 0;  // fetch/parse failures, source- and article-level

  bool any_source_succeeded() const { return feeds_polled > 0; }
};

struct ScanSummary {
  std::size_t articles_scanned = 0;
  std::size_t records_written = 0;
  std::string lexicon_version;
};

// Polls every roster feed through `transport` and stores the reachable
// articles. Per-source failures are diagnosed and counted, never fatal.
// Validates config, roster and fixture inputs before the store is opened.
CrawlSummary cmd_crawl(const RunConfig& config, Transport& transport, std::ostream& diagnostics);

// Scans every stored article under the configured lexicon and appends the
// resulting mention records idempotently.
ScanSummary cmd_scan(const RunConfig& config, std::ostream& diagnostics);

// Builds the rendered report document (shares, changes, seats, polls) from
// the store, or from an externally supplied share table when
// config.from_shares is set.
std::string cmd_report(const RunConfig& config, std::ostream& diagnostics);

std::string to_text(const CrawlSummary& summary);
std::string to_text(const ScanSummary& summary);

}  // namespace mediapulse
