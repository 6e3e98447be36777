#include "mediapulse/commands.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "mediapulse/errors.hpp"
#include "mediapulse/io.hpp"
#include "mediapulse/lexicon.hpp"
#include "mediapulse/matcher.hpp"
#include "mediapulse/metrics.hpp"
#include "mediapulse/report.hpp"
#include "mediapulse/store.hpp"

namespace mediapulse {

CrawlSummary cmd_crawl(const RunConfig& config, Transport& transport, std::ostream& diagnostics) {
  config.validate();
  if (!std::filesystem::exists(config.roster_path)) {
    throw ConfigError("roster file '" + config.roster_path.string() + "' does not exist");
  }
  std::vector<FeedSource> roster = load_roster(read_file(config.roster_path));
  if (roster.empty()) throw ConfigError("roster declares no sources");

  Store store = Store::open(config.store_path, Store::Mode::read_write);

  CrawlSummary summary;
  summary.sources_total = roster.size();

  for (const auto& source : roster) {
    FeedParseResult parsed;
    Timestamp feed_fetched_at = 0;
    try {
      FetchResponse feed = fetch_feed(source, transport);
      feed_fetched_at = feed.fetched_at;
      parsed = parse_feed(feed.body, source);
    } catch (const Error& e) {
      ++summary.errors;
      diagnostics << "source " << source.source_id << ": " << e.what() << "\n";
      continue;
    }
    ++summary.feeds_polled;
    summary.items_seen += parsed.items.size() + parsed.items_without_link;
    if (parsed.items_without_link > 0) {
      diagnostics << "source " << source.source_id << ": " << parsed.items_without_link
                  << " item(s) without a usable link\n";
    }

    for (const auto& item : parsed.items) {
      ArticleDocument doc;
      if (config.summaries_only) {
        // No page fetch: the feed entry is the document, stamped with the
        // feed's own fetch time (recorded replays may lack one; the item's
        // publication time stands in).
        Timestamp seen_at = feed_fetched_at;
        if (seen_at == 0 && item.published_at) seen_at = *item.published_at;
        if (seen_at == 0) {
          ++summary.errors;
          diagnostics << "article " << item.link << ": no usable timestamp for "
                      << "summaries-only indexing\n";
          continue;
        }
        doc = document_from_summary(item, seen_at);
      } else {
        try {
          doc = fetch_article(item, transport);
        } catch (const FetchError& e) {
          ++summary.errors;
          diagnostics << "article " << item.link << ": " << e.what() << "\n";
          continue;
        }
      }
      ++summary.articles_fetched;

      ArticleRecord record;
      record.url = doc.url;
      record.source_id = doc.source_id;
      record.fetched_at = doc.fetched_at;
      record.published_at = doc.published_at;
      record.bucket_date = bucket_date_for(doc.fetched_at, doc.published_at, config.bucket);
      record.content_hash = doc.content_hash;
      record.title = doc.title;
      record.extracted_text = doc.extracted_text;

      switch (store.upsert_article(record)) {
        case UpsertResult::inserted:
          ++summary.inserted;
          break;
        case UpsertResult::duplicate_unchanged:
          ++summary.duplicates_unchanged;
          break;
        case UpsertResult::duplicate_content_changed:
          ++summary.content_changed;
          diagnostics << "article " << record.url << ": content changed since first crawl\n";
          break;
      }
    }
  }

  return summary;
}

ScanSummary cmd_scan(const RunConfig& config, std::ostream& diagnostics) {
  config.validate();
  if (!std::filesystem::exists(config.lexicon_path)) {
    throw ConfigError("lexicon file '" + config.lexicon_path.string() + "' does not exist");
  }
  Lexicon lexicon = load_lexicon(read_file(config.lexicon_path));
  CompiledMatcher matcher = compile(lexicon, config.normalization);

  Store store = Store::open(config.store_path, Store::Mode::read_write);

  ScanSummary summary;
  summary.lexicon_version = matcher.version();

  for (const auto& article : store.articles()) {
    MentionCounts counts = count_mentions(article.extracted_text, matcher);
    std::vector<MentionRecord> records;
    for (const auto& [entity_id, count] : counts) {
      if (count == 0) continue;
      records.push_back(MentionRecord{article.url, entity_id, count, matcher.version()});
    }
    summary.records_written += store.append_mentions(records);
    ++summary.articles_scanned;
  }

  if (summary.articles_scanned == 0) {
    diagnostics << "store is empty, nothing to scan\n";
  }
  return summary;
}

namespace {

struct GroupReport {
  std::vector<DailyTally> tallies;
  ShareTable shares;
  std::vector<ChangeRow> changes;
};

GroupReport build_group_report(const Store& store, const Lexicon& lexicon,
                               const CompiledMatcher& matcher, EntityKind kind,
                               const RunConfig& config) {
  QueryOptions options;
  options.kind = kind;
  options.lexicon = &lexicon;
  options.lexicon_version = matcher.version();
  options.count_reappearances = config.count_reappearances;
  auto rows = store.query_range(config.window_first, config.window_last, options);

  GroupReport report;
  report.tallies = tally_daily(rows, kind, config.window_first, config.window_last, lexicon);

  std::vector<std::string> order;
  for (const Entity* entity : lexicon.group(kind)) order.push_back(entity->id);
  report.shares = compute_shares(report.tallies, kind, std::move(order));
  report.changes = relative_change(report.shares, config.window_first, config.window_last);
  return report;
}

}  // namespace

std::string cmd_report(const RunConfig& config, std::ostream& diagnostics) {
  config.validate();

  ReportInputs inputs;
  inputs.window_first = config.window_first;
  inputs.window_last = config.window_last;

  bool want_parties =
      config.group == GroupSelection::parties || config.group == GroupSelection::both;
  bool want_leaders =
      config.group == GroupSelection::leaders || config.group == GroupSelection::both;

  if (config.from_shares) {
    if (!std::filesystem::exists(*config.from_shares)) {
      throw ConfigError("share table file '" + config.from_shares->string() +
                        "' does not exist");
    }
    auto tables = load_share_tables_csv(read_file(*config.from_shares));
    for (auto& table : tables) {
      if (table.rows.empty()) continue;
      // Change endpoints are the table's own first and last day.
      auto changes = relative_change(table, table.rows.front().date, table.rows.back().date);
      if (table.group == EntityKind::party && want_parties) {
        inputs.party_changes = std::move(changes);
        inputs.party_shares = std::move(table);
      } else if (table.group == EntityKind::leader && want_leaders) {
        inputs.leader_changes = std::move(changes);
        inputs.leader_shares = std::move(table);
      }
    }
    // Window header reflects the supplied tables.
    CivilDate min_date{9999, 12, 31};
    CivilDate max_date{0, 1, 1};
    bool dated = false;
    for (const auto* table : {&inputs.party_shares, &inputs.leader_shares}) {
      if (!table->has_value() || (*table)->rows.empty()) continue;
      dated = true;
      min_date = std::min(min_date, (*table)->rows.front().date);
      max_date = std::max(max_date, (*table)->rows.back().date);
    }
    if (dated) {
      inputs.window_first = min_date;
      inputs.window_last = max_date;
    }
  } else {
    if (!std::filesystem::exists(config.lexicon_path)) {
      throw ConfigError("lexicon file '" + config.lexicon_path.string() + "' does not exist");
    }
    Lexicon lexicon = load_lexicon(read_file(config.lexicon_path));
    CompiledMatcher matcher = compile(lexicon, config.normalization);
    Store store = Store::open(config.store_path, Store::Mode::read_only);

    for (const auto& entity : lexicon.entities()) {
      inputs.display_names[entity.id] = entity.display_name;
    }
    if (want_parties) {
      auto report = build_group_report(store, lexicon, matcher, EntityKind::party, config);
      inputs.party_tallies = std::move(report.tallies);
      inputs.party_shares = std::move(report.shares);
      inputs.party_changes = std::move(report.changes);
    }
    if (want_leaders) {
      auto report = build_group_report(store, lexicon, matcher, EntityKind::leader, config);
      inputs.leader_tallies = std::move(report.tallies);
      inputs.leader_shares = std::move(report.shares);
      inputs.leader_changes = std::move(report.changes);
    }

    bool all_empty = true;
    for (const auto* tallies : {&inputs.party_tallies, &inputs.leader_tallies}) {
      for (const auto& tally : *tallies) {
        for (const auto& [id, count] : tally.counts) {
          if (count > 0) all_empty = false;
        }
      }
    }
    if (all_empty) {
      diagnostics << "warning: no mentions in window " << to_string(config.window_first)
                  << " .. " << to_string(config.window_last)
                  << " (shares are undefined)\n";
    }
  }

  if (std::filesystem::exists(config.elections_path)) {
    ElectionFixture fixture = load_election_fixture(read_file(config.elections_path));
    inputs.seat_records = fixture.seats;
    inputs.seat_deltas = seat_delta(fixture.seats);
    inputs.poll_rows = poll_comparison(fixture.polls, fixture.seats);
  } else if (config.elections_explicit) {
    throw ConfigError("elections file '" + config.elections_path.string() + "' does not exist");
  } else {
    diagnostics << "note: no elections fixture at " << config.elections_path.string()
                << ", seat/poll sections omitted\n";
  }

  // Share-sum validation pass: published tables must total 100 per row.
  for (const auto* table : {&inputs.party_shares, &inputs.leader_shares}) {
    if (!table->has_value()) continue;
    for (const auto& [date, sum] : share_row_sums(**table)) {
      if (sum && (*sum < 99.95 || *sum > 100.05)) {
        diagnostics << "warning: " << (((*table)->group == EntityKind::party) ? "party" : "leader")
                    << " share row " << to_string(date) << " sums to "
                    << format_fixed2(sum, DecimalSeparator::dot) << ", expected 100.00 +/- 0.05\n";
      }
    }
  }

  return render_report(inputs, config.output_format, config.decimal);
}

std::string to_text(const CrawlSummary& summary) {
  std::ostringstream out;
  out << "sources: " << summary.sources_total << "\n"
      << "feeds polled: " << summary.feeds_polled << "\n"
      << "items seen: " << summary.items_seen << "\n"
      << "articles fetched: " << summary.articles_fetched << "\n"
      << "inserted: " << summary.inserted << "\n"
      << "duplicates unchanged: " << summary.duplicates_unchanged << "\n"
      << "content changed: " << summary.content_changed << "\n"
      << "errors: " << summary.errors << "\n";
  return out.str();
}

std::string to_text(const ScanSummary& summary) {
  std::ostringstream out;
  out << "articles scanned: " << summary.articles_scanned << "\n"
      << "mention records written: " << summary.records_written << "\n"
      << "lexicon version: " << summary.lexicon_version << "\n";
  return out.str();
}

}  // namespace mediapulse
