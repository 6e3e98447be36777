#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mediapulse/dates.hpp"
#include "mediapulse/fetch.hpp"
#include "mediapulse/report.hpp"
#include "mediapulse/store.hpp"
#include "mediapulse/text_norm.hpp"

namespace mediapulse {

enum class GroupSelection { parties, leaders, both };

std::optional<GroupSelection> group_selection_from_string(std::string_view text);

// One reproducible run: where the inputs live, the campaign window, and the
// policies every stage runs under. Defaults mirror the bundled Spanish
// November-2019 configuration.
struct RunConfig {
  std::filesystem::path roster_path = "data/sources.conf";
  std::filesystem::path lexicon_path = "data/lexicon.conf";
  std::filesystem::path store_path = "store";
  std::filesystem::path elections_path = "data/elections_2019.conf";
  bool elections_explicit = false;  // explicit paths must exist; the default
                                    // is skipped quietly when absent

  CivilDate window_first{2019, 11, 1};
  CivilDate window_last{2019, 11, 10};

  NormalizationPolicy normalization;
  FetchPolicy fetch;
  BucketPolicy bucket;

  std::optional<std::filesystem::path> offline_fixture_dir;
  OutputFormat output_format = OutputFormat::markdown;
  DecimalSeparator decimal = DecimalSeparator::dot;
  GroupSelection group = GroupSelection::both;
  std::optional<std::filesystem::path> from_shares;
  bool summaries_only = false;       // scan RSS titles/summaries, skip article pages
  bool count_reappearances = false;  // tally an article on every day it reappeared

  void validate() const;  // throws ConfigError
};

// Reads a config document ([run], [normalization], [fetch], [bucket]
// blocks, all optional) over the defaults. CLI flags are applied on top by
// the caller; MEDIAPULSE_STORE sits between the two.
RunConfig load_run_config(const std::optional<std::filesystem::path>& config_file);

// "FIRST:LAST" with ISO dates, e.g. "2019-11-01:2019-11-10".
std::pair<CivilDate, CivilDate> parse_window(std::string_view text);

}  // namespace mediapulse
