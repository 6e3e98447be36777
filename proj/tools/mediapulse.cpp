#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mediapulse/commands.hpp"
#include "mediapulse/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitUsage = 2;

struct CliOptions {
  std::optional<std::string> config_file;
  std::optional<std::string> offline_dir;
  std::optional<std::string> window;
  std::optional<std::string> group;
  std::optional<std::string> format;
  std::optional<std::string> decimal;
  std::optional<std::string> from_shares;
  std::optional<std::string> store_path;
  std::optional<std::string> roster_path;
  std::optional<std::string> lexicon_path;
  std::optional<std::string> elections_path;
  bool summaries_only = false;
  bool count_reappearances = false;
};

// Precedence: CLI flag > MEDIAPULSE_STORE > config file > default.
mediapulse::RunConfig build_config(const CliOptions& options) {
  using mediapulse::ConfigError;

  std::optional<std::filesystem::path> config_path;
  if (options.config_file) config_path = *options.config_file;
  mediapulse::RunConfig config = mediapulse::load_run_config(config_path);

  if (const char* env_store = std::getenv("MEDIAPULSE_STORE"); env_store && *env_store) {
    config.store_path = env_store;
  }

  if (options.store_path) config.store_path = *options.store_path;
  if (options.roster_path) config.roster_path = *options.roster_path;
  if (options.lexicon_path) config.lexicon_path = *options.lexicon_path;
  if (options.elections_path) {
    config.elections_path = *options.elections_path;
    config.elections_explicit = true;
  }
  if (options.offline_dir) config.offline_fixture_dir = *options.offline_dir;
  if (options.window) {
    auto [first, last] = mediapulse::parse_window(*options.window);
    config.window_first = first;
    config.window_last = last;
  }
  if (options.group) {
    auto group = mediapulse::group_selection_from_string(*options.group);
    if (!group) throw ConfigError("unknown group '" + *options.group + "'");
    config.group = *group;
  }
  if (options.format) {
    auto format = mediapulse::output_format_from_string(*options.format);
    if (!format) throw ConfigError("unknown format '" + *options.format + "'");
    config.output_format = *format;
  }
  if (options.decimal) {
    auto decimal = mediapulse::decimal_separator_from_string(*options.decimal);
    if (!decimal) throw ConfigError("unknown decimal separator '" + *options.decimal + "'");
    config.decimal = *decimal;
  }
  if (options.from_shares) config.from_shares = *options.from_shares;
  if (options.summaries_only) config.summaries_only = true;
  if (options.count_reappearances) config.count_reappearances = true;

  config.validate();
  return config;
}

int run_crawl(const CliOptions& options) {
  mediapulse::RunConfig config = build_config(options);

  std::unique_ptr<mediapulse::Transport> transport;
  if (config.offline_fixture_dir) {
    transport = std::make_unique<mediapulse::FixtureTransport>(*config.offline_fixture_dir);
  } else {
    transport = std::make_unique<mediapulse::LiveTransport>(config.fetch);
  }

  mediapulse::CrawlSummary summary = mediapulse::cmd_crawl(config, *transport, std::cerr);
  std::cout << mediapulse::to_text(summary);
  return summary.any_source_succeeded() ? kExitOk : kExitOperational;
}

int run_scan(const CliOptions& options) {
  mediapulse::RunConfig config = build_config(options);
  mediapulse::ScanSummary summary = mediapulse::cmd_scan(config, std::cerr);
  std::cout << mediapulse::to_text(summary);
  return kExitOk;
}

int run_report(const CliOptions& options) {
  mediapulse::RunConfig config = build_config(options);
  std::cout << mediapulse::cmd_report(config, std::cerr);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mediapulse: newspaper mention shares over an election campaign window"};
  app.require_subcommand(1);

  CliOptions options;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_file, "run configuration file");
    cmd->add_option("--store", options.store_path, "store directory");
    cmd->add_option("--window", options.window, "date window FIRST:LAST (YYYY-MM-DD)");
  };

  CLI::App* crawl = app.add_subcommand("crawl", "poll roster feeds and store articles");
  add_common(crawl);
  crawl->add_option("--offline", options.offline_dir, "offline fixture directory");
  crawl->add_option("--roster", options.roster_path, "feed roster file");
  crawl->add_flag("--summaries-only", options.summaries_only,
                  "index feed titles/summaries instead of fetching article pages");

  CLI::App* scan = app.add_subcommand("scan", "count lexicon mentions in stored articles");
  add_common(scan);
  scan->add_option("--lexicon", options.lexicon_path, "lexicon file");

  CLI::App* report = app.add_subcommand("report", "render share/change/seat tables");
  add_common(report);
  report->add_option("--lexicon", options.lexicon_path, "lexicon file");
  report->add_option("--group", options.group, "parties|leaders|both");
  report->add_option("--format", options.format, "markdown|csv|structured");
  report->add_option("--decimal", options.decimal, "dot|comma");
  report->add_option("--from-shares", options.from_shares,
                     "share table CSV replacing the store pipeline");
  report->add_option("--elections", options.elections_path, "seats/polls fixture file");
  report->add_flag("--count-reappearances", options.count_reappearances,
                   "tally an article on every day it reappeared in a feed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (crawl->parsed()) return run_crawl(options);
    if (scan->parsed()) return run_scan(options);
    if (report->parsed()) return run_report(options);
    std::cerr << "no subcommand given\n";
    return kExitUsage;
  } catch (const mediapulse::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mediapulse::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mediapulse::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mediapulse::AmbiguityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mediapulse::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mediapulse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitOperational;
  }
}
