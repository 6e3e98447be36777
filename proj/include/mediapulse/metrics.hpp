#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mediapulse/dates.hpp"
#include "mediapulse/lexicon.hpp"
#include "mediapulse/store.hpp"

namespace mediapulse {

// Raw per-day occurrence counts for one entity group.
struct DailyTally {
  CivilDate date;
  std::map<std::string, std::int64_t> counts;  // every group entity present
};

// Per-day mention shares as percentages. A day with no mentions at all has
// no defined shares (nullopt per entity) rather than fabricated zeros.
struct ShareTable {
  EntityKind group = EntityKind::party;
  std::vector<std::string> entity_ids;  // column order
  struct Row {
    CivilDate date;
    std::vector<std::optional<double>> shares;  // aligned with entity_ids
  };
  std::vector<Row> rows;  // date-ascending
};

// Relative share change between the window endpoints, percent of the
// initial share. Undefined when the first share is missing or zero.
struct ChangeRow {
  std::string entity_id;
  std::optional<double> first_share;
  std::optional<double> last_share;
  std::optional<double> relative_change;
};

struct SeatRecord {
  std::string party_id;
  int seats_april = 0;
  int seats_november = 0;
};

struct PollRange {
  std::string party_id;
  int low = 0;
  int high = 0;
};

struct SeatDelta {
  std::string party_id;
  int delta = 0;
};

struct PollComparisonRow {
  std::string party_id;
  int november_seats = 0;
  int poll_low = 0;
  int poll_high = 0;
  bool within_range = false;
  int miss_distance = 0;  // 0 inside the range, else distance to nearest bound
};

// Sums mention counts per entity per day over [first, last]. Days without
// data appear with all-zero counts. Rows must come from a single lexicon
// version (ConsistencyError otherwise) and every entity id must be known to
// the lexicon.
std::vector<DailyTally> tally_daily(const std::vector<JoinedMention>& rows, EntityKind group,
                                    CivilDate first, CivilDate last, const Lexicon& lexicon);

// share = count / day total * 100, within the group. Unrounded; rounding is
// a rendering concern.
ShareTable compute_shares(const std::vector<DailyTally>& tallies, EntityKind group,
                          std::vector<std::string> entity_order);

// Per-row share sums (nullopt for undefined rows); the validation pass used
// to check that published share tables total 100.
std::vector<std::pair<CivilDate, std::optional<double>>> share_row_sums(const ShareTable& table);

// (last - first) / first * 100 per entity, in the table's column order.
// Throws ArgumentError when either date is missing from the table.
std::vector<ChangeRow> relative_change(const ShareTable& table, CivilDate first_date,
                                       CivilDate last_date);

std::vector<SeatDelta> seat_delta(const std::vector<SeatRecord>& records);

// Checks each party's November seats against its poll interval. Requires
// polls and seat records to cover the same party ids (AlignmentError).
// Output order follows `polls`.
std::vector<PollComparisonRow> poll_comparison(const std::vector<PollRange>& polls,
                                               const std::vector<SeatRecord>& records);

// Seats and poll ranges from a fixture document:
//
//   [party]
//   id = vox
//   seats_april = 24
//   seats_november = 52
//   poll_low = 14
//   poll_high = 21
//
// Poll keys are optional per party; parties without them are absent from
// the poll comparison.
struct ElectionFixture {
  std::vector<SeatRecord> seats;
  std::vector<PollRange> polls;
};

ElectionFixture load_election_fixture(std::string_view config_text);

// Share tables supplied directly (one CSV row per group/date/entity), the
// `report --from-shares` input:
//
//   group,date,entity_id,share
//   parties,2019-11-01,psoe,27.61
//
// Entity order is first appearance within the group; rows sort by date.
std::vector<ShareTable> load_share_tables_csv(std::string_view csv_text);

}  // namespace mediapulse
