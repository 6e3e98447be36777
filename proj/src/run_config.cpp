#include "mediapulse/run_config.hpp"

#include <cstdlib>

#include "mediapulse/conf.hpp"
#include "mediapulse/errors.hpp"
#include "mediapulse/io.hpp"

namespace mediapulse {

std::optional<GroupSelection> group_selection_from_string(std::string_view text) {
  if (text == "parties") return GroupSelection::parties;
  if (text == "leaders") return GroupSelection::leaders;
  if (text == "both") return GroupSelection::both;
  return std::nullopt;
}

std::pair<CivilDate, CivilDate> parse_window(std::string_view text) {
  std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("window must be FIRST:LAST, got '" + std::string(text) + "'");
  }
  auto first = parse_date(text.substr(0, colon));
  auto last = parse_date(text.substr(colon + 1));
  if (!first || !last) {
    throw ConfigError("window dates must be YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return {*first, *last};
}

void RunConfig::validate() const {
  if (window_last < window_first) {
    throw ConfigError("window first date " + to_string(window_first) + " is after last date " +
                      to_string(window_last));
  }
  if (fetch.timeout.count() <= 0) throw ConfigError("fetch timeout must be positive");
  if (fetch.max_body_bytes == 0) throw ConfigError("max_body_bytes must be positive");
  if (fetch.max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (!TimeZone::from_name(bucket.timezone)) {
    throw ConfigError("unknown timezone '" + bucket.timezone + "'");
  }
}

namespace {

bool parse_bool(const ConfEntry& entry) {
  if (entry.value == "true" || entry.value == "1" || entry.value == "yes") return true;
  if (entry.value == "false" || entry.value == "0" || entry.value == "no") return false;
  throw ParseError("'" + entry.key + "' must be a boolean, got '" + entry.value + "'",
                   entry.line);
}

long parse_long(const ConfEntry& entry) {
  char* end = nullptr;
  long value = std::strtol(entry.value.c_str(), &end, 10);
  if (end == entry.value.c_str() || *end != '\0') {
    throw ParseError("'" + entry.key + "' must be an integer, got '" + entry.value + "'",
                     entry.line);
  }
  return value;
}

void apply_run_block(RunConfig& config, const ConfBlock& block) {
  for (const auto& entry : block.entries) {
    if (entry.key == "roster") {
      config.roster_path = entry.value;
    } else if (entry.key == "lexicon") {
      config.lexicon_path = entry.value;
    } else if (entry.key == "store") {
      config.store_path = entry.value;
    } else if (entry.key == "elections") {
      config.elections_path = entry.value;
      config.elections_explicit = true;
    } else if (entry.key == "window") {
      auto [first, last] = parse_window(entry.value);
      config.window_first = first;
      config.window_last = last;
    } else if (entry.key == "offline_fixtures") {
      config.offline_fixture_dir = entry.value;
    } else if (entry.key == "format") {
      auto format = output_format_from_string(entry.value);
      if (!format) throw ParseError("unknown format '" + entry.value + "'", entry.line);
      config.output_format = *format;
    } else if (entry.key == "decimal") {
      auto decimal = decimal_separator_from_string(entry.value);
      if (!decimal) throw ParseError("unknown decimal separator '" + entry.value + "'",
                                     entry.line);
      config.decimal = *decimal;
    } else if (entry.key == "group") {
      auto group = group_selection_from_string(entry.value);
      if (!group) throw ParseError("unknown group '" + entry.value + "'", entry.line);
      config.group = *group;
    } else if (entry.key == "summaries_only") {
      config.summaries_only = parse_bool(entry);
    } else if (entry.key == "count_reappearances") {
      config.count_reappearances = parse_bool(entry);
    } else {
      throw ParseError("unknown key '" + entry.key + "' in [run] block", entry.line);
    }
  }
}

void apply_normalization_block(RunConfig& config, const ConfBlock& block) {
  for (const auto& entry : block.entries) {
    if (entry.key == "case_fold") {
      config.normalization.case_fold = parse_bool(entry);
    } else if (entry.key == "strip_diacritics") {
      config.normalization.strip_diacritics = parse_bool(entry);
    } else if (entry.key == "collapse_whitespace") {
      config.normalization.collapse_whitespace = parse_bool(entry);
    } else {
      throw ParseError("unknown key '" + entry.key + "' in [normalization] block", entry.line);
    }
  }
}

void apply_fetch_block(RunConfig& config, const ConfBlock& block) {
  for (const auto& entry : block.entries) {
    if (entry.key == "timeout_ms") {
      config.fetch.timeout = std::chrono::milliseconds(parse_long(entry));
    } else if (entry.key == "max_retries") {
      config.fetch.max_retries = static_cast<int>(parse_long(entry));
    } else if (entry.key == "retry_backoff_ms") {
      std::vector<std::chrono::milliseconds> schedule;
      std::string_view text = entry.value;
      std::size_t pos = 0;
      while (pos <= text.size() && !text.empty()) {
        std::size_t comma = text.find(',', pos);
        std::string_view piece =
            (comma == std::string_view::npos) ? text.substr(pos) : text.substr(pos, comma - pos);
        char* end = nullptr;
        std::string piece_str(piece);
        long ms = std::strtol(piece_str.c_str(), &end, 10);
        if (end == piece_str.c_str() || *end != '\0' || ms < 0) {
          throw ParseError("retry_backoff_ms must be comma-separated integers", entry.line);
        }
        schedule.emplace_back(ms);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      config.fetch.retry_backoff = std::move(schedule);
    } else if (entry.key == "per_host_delay_ms") {
      config.fetch.per_host_delay = std::chrono::milliseconds(parse_long(entry));
    } else if (entry.key == "max_body_bytes") {
      config.fetch.max_body_bytes = static_cast<std::size_t>(parse_long(entry));
    } else if (entry.key == "user_agent") {
      config.fetch.user_agent = entry.value;
    } else {
      throw ParseError("unknown key '" + entry.key + "' in [fetch] block", entry.line);
    }
  }
}

void apply_bucket_block(RunConfig& config, const ConfBlock& block) {
  for (const auto& entry : block.entries) {
    if (entry.key == "mode") {
      if (entry.value == "by_fetch_date") {
        config.bucket.mode = BucketMode::by_fetch_date;
      } else if (entry.value == "by_published_date_fallback_fetch") {
        config.bucket.mode = BucketMode::by_published_date_fallback_fetch;
      } else {
        throw ParseError("unknown bucket mode '" + entry.value + "'", entry.line);
      }
    } else if (entry.key == "timezone") {
      config.bucket.timezone = entry.value;
    } else {
      throw ParseError("unknown key '" + entry.key + "' in [bucket] block", entry.line);
    }
  }
}

}  // namespace

RunConfig load_run_config(const std::optional<std::filesystem::path>& config_file) {
  RunConfig config;
  if (!config_file) return config;

  if (!std::filesystem::exists(*config_file)) {
    throw ConfigError("config file '" + config_file->string() + "' does not exist");
  }
  for (const auto& block : parse_conf(read_file(*config_file))) {
    if (block.name == "run") {
      apply_run_block(config, block);
    } else if (block.name == "normalization") {
      apply_normalization_block(config, block);
    } else if (block.name == "fetch") {
      apply_fetch_block(config, block);
    } else if (block.name == "bucket") {
      apply_bucket_block(config, block);
    } else {
      throw ParseError("unknown block [" + block.name + "] in config file", block.line);
    }
  }
  return config;
}

}  // namespace mediapulse
