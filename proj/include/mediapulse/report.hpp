#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mediapulse/metrics.hpp"

namespace mediapulse {

enum class OutputFormat { markdown, csv, structured };
enum class DecimalSeparator { dot, comma };

std::optional<OutputFormat> output_format_from_string(std::string_view text);
std::optional<DecimalSeparator> decimal_separator_from_string(std::string_view text);

// Everything a report renders, already computed. Rendering is pure and
// byte-deterministic for identical inputs.
struct ReportInputs {
  CivilDate window_first;
  CivilDate window_last;

  std::optional<ShareTable> party_shares;
  std::optional<ShareTable> leader_shares;
  std::vector<ChangeRow> party_changes;
  std::vector<ChangeRow> leader_changes;
  std::vector<SeatDelta> seat_deltas;
  std::vector<SeatRecord> seat_records;  // april/november context for deltas
  std::vector<PollComparisonRow> poll_rows;

  // Raw per-day counts backing the share tables; carried into the
  // structured format for auditability.
  std::vector<DailyTally> party_tallies;
  std::vector<DailyTally> leader_tallies;

  std::map<std::string, std::string> display_names;  // entity id -> label
};

// Renders, in order: party shares, leader shares, party changes, leader
// changes, seat deltas, poll comparison. Undefined values render as "—"
// (markdown), an empty field (csv) or null (structured). All numbers carry
// two decimals; internal math stays unrounded.
std::string render_report(const ReportInputs& inputs, OutputFormat format,
                          DecimalSeparator decimal);

// "27.61" or "27,61"; "" for nullopt.
std::string format_fixed2(std::optional<double> value, DecimalSeparator decimal);

}  // namespace mediapulse
