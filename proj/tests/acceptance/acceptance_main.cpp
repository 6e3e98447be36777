// Acceptance suite: one check per release criterion, one PASS/FAIL line each.
// Run from the repository root (ctest does this automatically).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mediapulse/dates.hpp"
#include "mediapulse/errors.hpp"
#include "mediapulse/feed.hpp"
#include "mediapulse/html_text.hpp"
#include "mediapulse/io.hpp"
#include "mediapulse/lexicon.hpp"
#include "mediapulse/matcher.hpp"
#include "mediapulse/metrics.hpp"
#include "mediapulse/store.hpp"
#include "support/naive_matcher.hpp"
#include "support/test_util.hpp"

using namespace mediapulse;
using mediapulse::test::mediapulse_bin;
using mediapulse::test::run_command;
using mediapulse::test::TempDir;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

// ---- criterion 1: published change values through report --from-shares ----

std::map<std::string, std::pair<std::string, double>> parse_change_section(
    const std::string& csv, const std::string& header) {
  std::map<std::string, std::pair<std::string, double>> by_entity;
  std::size_t at = csv.find(header);
  require(at != std::string::npos, "missing section " + header);
  std::istringstream lines(csv.substr(at));
  std::string line;
  std::getline(lines, line);  // section header
  std::getline(lines, line);  // column header
  while (std::getline(lines, line) && !line.empty()) {
    std::istringstream fields(line);
    std::string entity, first, last, change;
    std::getline(fields, entity, ',');
    std::getline(fields, first, ',');
    std::getline(fields, last, ',');
    std::getline(fields, change, ',');
    by_entity[entity] = {change, change.empty() ? 0.0 : std::stod(change)};
  }
  return by_entity;
}

void criterion_table56() {
  auto start = std::chrono::steady_clock::now();
  auto result = run_command({mediapulse_bin(), "report", "--from-shares",
                             "data/published_shares.csv", "--format", "csv"});
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  require(result.exit_code == 0, "report --from-shares exited " +
                                     std::to_string(result.exit_code) + ": " + result.err);

  const std::vector<std::pair<std::string, double>> party_expected = {
      {"psoe", -47.29}, {"pp", -31.30}, {"ciudadanos", 58.64},
      {"unidas_podemos", -45.50}, {"vox", 131.26}};
  const std::vector<std::pair<std::string, double>> leader_expected = {
      {"sanchez", -43.30}, {"casado", -7.99}, {"rivera", -18.43},
      {"iglesias", -13.28}, {"abascal", 506.44}};

  auto parties = parse_change_section(result.out, "# changes parties");
  auto leaders = parse_change_section(result.out, "# changes leaders");
  for (const auto& [entity, published] : party_expected) {
    require(parties.count(entity) == 1, "party row missing: " + entity);
    double got = parties[entity].second;
    require(std::abs(got - published) <= 0.5,
            entity + ": computed " + std::to_string(got) + " vs published " +
                std::to_string(published) + " beyond 0.5");
  }
  for (const auto& [entity, published] : leader_expected) {
    require(leaders.count(entity) == 1, "leader row missing: " + entity);
    double got = leaders[entity].second;
    require(std::abs(got - published) <= 0.5,
            entity + ": computed " + std::to_string(got) + " vs published " +
                std::to_string(published) + " beyond 0.5");
  }
  require(parties["ciudadanos"].first == "58.64",
          "Ciudadanos must match to 2 decimals, got " + parties["ciudadanos"].first);
  require(leaders["sanchez"].first == "-43.30",
          "Sanchez must match to 2 decimals, got " + leaders["sanchez"].first);
  require(elapsed.count() < 1000,
          "runtime " + std::to_string(elapsed.count()) + " ms exceeds 1 s");
}

// ---- criterion 2: share rows re-sum to 100.00 +/- 0.05 ----

void criterion_row_sums() {
  auto start = std::chrono::steady_clock::now();
  auto result = run_command({mediapulse_bin(), "report", "--from-shares",
                             "data/published_shares.csv", "--format", "structured"});
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  require(result.exit_code == 0, "report exited " + std::to_string(result.exit_code));

  auto doc = nlohmann::json::parse(result.out);
  std::size_t rows_checked = 0;
  for (const char* group : {"parties", "leaders"}) {
    for (const auto& entry : doc.at("share_row_sums").at(group)) {
      require(!entry.at("sum").is_null(), "undefined sum in published tables");
      double sum = entry.at("sum").get<double>();
      require(sum >= 99.95 && sum <= 100.05,
              std::string(group) + " " + entry.at("date").get<std::string>() + " sums to " +
                  std::to_string(sum));
      ++rows_checked;
    }
  }
  require(rows_checked == 20, "expected 20 rows, checked " + std::to_string(rows_checked));
  double first_party_sum =
      doc.at("share_row_sums").at("parties").at(0).at("sum").get<double>();
  require(first_party_sum == 100.0, "01-nov party row must sum to exactly 100.00");
  require(elapsed.count() < 1000, "runtime exceeds 1 s");
}

// ---- criterion 3: seat deltas and poll comparison ----

void criterion_seats_polls() {
  ElectionFixture fixture = load_election_fixture(read_file("data/elections_2019.conf"));
  auto deltas = seat_delta(fixture.seats);
  std::map<std::string, int> delta_by_id;
  for (const auto& delta : deltas) delta_by_id[delta.party_id] = delta.delta;
  require(delta_by_id.at("vox") == 28, "Vox delta must be +28");
  require(delta_by_id.at("ciudadanos") == -47, "Ciudadanos delta must be -47");

  auto rows = poll_comparison(fixture.polls, fixture.seats);
  std::map<std::string, PollComparisonRow> row_by_id;
  for (const auto& row : rows) row_by_id[row.party_id] = row;
  require(!row_by_id.at("vox").within_range, "Vox must be outside its CIS range");
  require(row_by_id.at("vox").poll_low == 14 && row_by_id.at("vox").poll_high == 21,
          "Vox CIS range must be 14-21");
  require(row_by_id.at("vox").miss_distance == 31, "Vox miss distance must be 31");
  require(row_by_id.at("psoe").miss_distance == 13, "PSOE miss distance must be 13");
}

// ---- criterion 4: matcher equals the naive oracle on randomized inputs ----

void criterion_matcher_oracle() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20191110);
  const std::vector<std::string> vocab = {
      "vox",   "podemos",  "unidas", "sanchez",  "pedro",      "pablo",  "iglesias",
      "casado", "partido", "popular", "socialista", "los",     "morados", "genova",
      "gobierno", "el",    "presidente", "abascal", "santiago", "rivera", "albert",
      "mitin",  "campana", "voto",   "urnas",     "debate"};

  std::size_t texts_checked = 0;
  for (int round = 0; round < 40; ++round) {
    // Random 10-entity lexicon with nested and overlapping multi-word aliases.
    std::vector<Entity> entities;
    std::set<std::vector<std::string>> used;
    for (int e = 0; e < 10; ++e) {
      Entity entity;
      entity.id = "e" + std::to_string(e);
      entity.kind = (e % 2 == 0) ? EntityKind::party : EntityKind::leader;
      entity.display_name = entity.id;
      int alias_count = 1 + static_cast<int>(rng() % 4);
      for (int a = 0; a < alias_count; ++a) {
        std::vector<std::string> tokens;
        int len = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < len; ++t) tokens.push_back(vocab[rng() % vocab.size()]);
        if (!used.insert(tokens).second) continue;
        std::string surface;
        for (std::size_t t = 0; t < tokens.size(); ++t) {
          if (t > 0) surface += ' ';
          surface += tokens[t];
        }
        entity.aliases.push_back(Alias{surface});
      }
      if (!entity.aliases.empty()) entities.push_back(std::move(entity));
    }
    Lexicon lexicon((std::vector<Entity>(entities)));
    CompiledMatcher matcher = compile(lexicon, {});

    for (int iter = 0; iter < 25; ++iter) {
      std::string text;
      std::size_t length = rng() % 400;
      for (std::size_t i = 0; i < length; ++i) {
        std::string word = vocab[rng() % vocab.size()];
        if (rng() % 5 == 0) word[0] = static_cast<char>(std::toupper(word[0]));
        text += word;
        switch (rng() % 8) {
          case 0: text += ", "; break;
          case 1: text += ".\n"; break;
          case 2: text += "; "; break;
          default: text += " "; break;
        }
      }
      MentionCounts actual = count_mentions(text, matcher);
      MentionCounts expected = test::naive_count_mentions(text, lexicon, {});
      require(actual == expected, "matcher and oracle diverge on round " +
                                      std::to_string(round) + " iter " + std::to_string(iter));
      ++texts_checked;
    }
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  require(texts_checked >= 1000,
          "only " + std::to_string(texts_checked) + " texts checked, need 1000");
  require(elapsed.count() < 30000,
          "runtime " + std::to_string(elapsed.count()) + " ms exceeds 30 s");
}

// ---- criterion 5: end-to-end determinism plus flat-scan equivalence ----

struct FlatTally {
  // kind -> date -> entity -> count
  std::map<EntityKind, std::map<CivilDate, std::map<std::string, std::int64_t>>> counts;
};

FlatTally flat_scan_pipeline(const Lexicon& lexicon) {
  NormalizationPolicy policy;
  auto zone = TimeZone::from_name("Europe/Madrid");
  FlatTally tally;

  std::size_t sources = 0;
  std::size_t articles = 0;
  std::set<CivilDate> days;
  for (const auto& dir : std::filesystem::directory_iterator("tests/fixtures/crawl")) {
    if (!dir.is_directory()) continue;
    auto manifest = nlohmann::json::parse(read_file(dir.path() / "manifest.json"));
    ++sources;
    for (const auto& node : manifest.at("articles")) {
      std::string html = read_file(dir.path() / node.at("file").get<std::string>());
      std::string text = extract_text(html);
      Timestamp fetched = *parse_iso8601(node.at("fetched_at").get<std::string>());
      CivilDate day = zone->local_date(fetched);
      days.insert(day);
      MentionCounts counts = test::naive_count_mentions(text, lexicon, policy);
      for (const auto& [entity_id, count] : counts) {
        if (count == 0) continue;
        EntityKind kind = lexicon.find(entity_id)->kind;
        tally.counts[kind][day][entity_id] += count;
      }
      ++articles;
    }
  }
  require(sources == 13, "corpus must have 13 sources, found " + std::to_string(sources));
  require(articles >= 40, "corpus must have at least 40 articles");
  require(days.size() == 10, "corpus must span a 10-day window, found " +
                                 std::to_string(days.size()) + " days");
  return tally;
}

void criterion_end_to_end() {
  TempDir scratch;
  std::vector<std::string> stores = {(scratch.path() / "s1").string(),
                                     (scratch.path() / "s2").string()};
  std::map<std::string, std::vector<std::string>> reports;  // format -> bytes per run

  for (const auto& store : stores) {
    auto crawl = run_command({mediapulse_bin(), "crawl", "--offline", "tests/fixtures/crawl",
                              "--roster", "tests/fixtures/roster.conf", "--store", store});
    require(crawl.exit_code == 0, "crawl failed: " + crawl.err);
    require(crawl.out.find("feeds polled: 13") != std::string::npos, "expected 13 feeds");
    require(crawl.out.find("errors: 0") != std::string::npos, "expected clean crawl");
    auto scan = run_command({mediapulse_bin(), "scan", "--store", store});
    require(scan.exit_code == 0, "scan failed: " + scan.err);
    for (const std::string format : {"markdown", "csv", "structured"}) {
      auto report = run_command(
          {mediapulse_bin(), "report", "--store", store, "--format", format});
      require(report.exit_code == 0, "report failed: " + report.err);
      reports[format].push_back(report.out);
    }
  }
  for (const auto& [format, runs] : reports) {
    require(runs[0] == runs[1], format + " reports differ between identical runs");
    require(!runs[0].empty(), format + " report is empty");
  }

  // Independent flat-scan pipeline: no store, naive matcher, direct bucketing.
  Lexicon lexicon = load_lexicon(read_file("data/lexicon.conf"));
  FlatTally expected = flat_scan_pipeline(lexicon);

  CompiledMatcher matcher = compile(lexicon, {});
  Store store = Store::open(stores[0], Store::Mode::read_only);
  for (EntityKind kind : {EntityKind::party, EntityKind::leader}) {
    QueryOptions options;
    options.kind = kind;
    options.lexicon = &lexicon;
    options.lexicon_version = matcher.version();
    auto rows = store.query_range({2019, 11, 1}, {2019, 11, 10}, options);
    auto tallies = tally_daily(rows, kind, {2019, 11, 1}, {2019, 11, 10}, lexicon);

    std::vector<std::string> order;
    for (const Entity* entity : lexicon.group(kind)) order.push_back(entity->id);
    ShareTable shares = compute_shares(tallies, kind, order);

    for (std::size_t row = 0; row < tallies.size(); ++row) {
      const auto& tally = tallies[row];
      std::int64_t brute_total = 0;
      for (const auto& [entity_id, count] : tally.counts) {
        std::int64_t brute = 0;
        auto by_date = expected.counts[kind].find(tally.date);
        if (by_date != expected.counts[kind].end()) {
          auto it = by_date->second.find(entity_id);
          if (it != by_date->second.end()) brute = it->second;
        }
        require(count == brute,
                "tally mismatch " + entity_id + " on " + to_string(tally.date) + ": store " +
                    std::to_string(count) + " vs flat scan " + std::to_string(brute));
        brute_total += brute;
      }
      // Shares recomputed from the flat scan must match bit for bit.
      for (std::size_t column = 0; column < order.size(); ++column) {
        std::int64_t brute = 0;
        auto by_date = expected.counts[kind].find(tally.date);
        if (by_date != expected.counts[kind].end()) {
          auto it = by_date->second.find(order[column]);
          if (it != by_date->second.end()) brute = it->second;
        }
        const auto& share = shares.rows[row].shares[column];
        if (brute_total == 0) {
          require(!share.has_value(), "share defined on an empty day");
        } else {
          double brute_share =
              static_cast<double>(brute) / static_cast<double>(brute_total) * 100.0;
          require(share.has_value() && *share == brute_share,
                  "share mismatch for " + order[column] + " on " + to_string(tally.date));
        }
      }
    }
  }
}

// ---- criterion 6: ingest robustness over the fixture suite ----

void criterion_ingest_robustness() {
  FeedSource source{"feedtest", "Fixture", "http://fixtures.local/feedtest/feed.xml"};

  auto rss = parse_feed(read_file("tests/fixtures/feeds/rss_missing_link.xml"), source);
  require(rss.items.size() == 2 && rss.items_without_link == 1,
          "RSS fixture must yield 2 items and 1 dropped");

  auto atom = parse_feed(read_file("tests/fixtures/feeds/atom_two_entries.xml"), source);
  require(atom.items.size() == 2, "Atom fixture must yield 2 items");

  for (const char* fixture :
       {"tests/fixtures/feeds/malformed_html_root.xml", "tests/fixtures/feeds/empty.xml",
        "tests/fixtures/feeds/garbage.bin"}) {
    bool typed_error = false;
    try {
      parse_feed(read_file(fixture), source);
    } catch (const FeedFormatError&) {
      typed_error = true;
    }
    require(typed_error, std::string(fixture) + " must raise a feed format error");
  }

  // Extraction leaves no residual markup on any fixture page.
  std::size_t pages = 0;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator("tests/fixtures")) {
    if (!entry.is_regular_file() || entry.path().extension() != ".html") continue;
    std::string text = extract_text(read_file(entry.path()));
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
      if (text[i] != '<') continue;
      char next = text[i + 1];
      bool residual = (next >= 'a' && next <= 'z') || (next >= 'A' && next <= 'Z') ||
                      next == '/' || next == '!' || next == '?';
      require(!residual, "residual markup in " + entry.path().string());
    }
    ++pages;
  }
  require(pages >= 50, "HTML fixture set has " + std::to_string(pages) + " pages, need 50");
}

// ---- criterion 7: headline totals are not reproducible, by design ----

void criterion_headline_totals() {
  // The original experiment's raw totals (16,220 mentions over >4,000 URLs)
  // depend on live November-2019 web content that no longer exists. They are
  // deliberately out of scope; published-table reproduction (criteria 1-3)
  // and the oracle/property suites (criteria 4-6) stand in for them.
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {"criterion-1 published share-change values via report --from-shares",
       criterion_table56},
      {"criterion-2 published share rows re-sum to 100.00 +/- 0.05", criterion_row_sums},
      {"criterion-3 seat deltas and CIS poll comparison", criterion_seats_polls},
      {"criterion-4 matcher equals naive oracle on 1000 randomized texts",
       criterion_matcher_oracle},
      {"criterion-5 offline crawl/scan/report determinism + flat-scan equality",
       criterion_end_to_end},
      {"criterion-6 ingest robustness on the fixture suite", criterion_ingest_robustness},
      {"criterion-7 headline totals acknowledged as non-reproducible",
       criterion_headline_totals},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      criterion.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("%s  %s  (%lld ms)\n", ok ? "PASS" : "FAIL", criterion.name.c_str(),
                static_cast<long long>(ms));
    if (!ok) {
      std::printf("      %s\n", detail.c_str());
      ++failures;
    }
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
