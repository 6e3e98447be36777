#include "mediapulse/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "mediapulse/conf.hpp"
#include "mediapulse/errors.hpp"

namespace mediapulse {

std::vector<DailyTally> tally_daily(const std::vector<JoinedMention>& rows, EntityKind group,
                                    CivilDate first, CivilDate last, const Lexicon& lexicon) {
  if (last < first) {
    throw ArgumentError("inverted tally range " + to_string(first) + " .. " + to_string(last));
  }

  std::optional<std::string> version;
  for (const auto& row : rows) {
    if (!version) {
      version = row.lexicon_version;
    } else if (*version != row.lexicon_version) {
      throw ConsistencyError("mentions mix lexicon versions '" + *version + "' and '" +
                             row.lexicon_version + "'");
    }
  }

  std::vector<DailyTally> tallies;
  std::map<CivilDate, std::size_t> index;
  for (CivilDate day = first;; day = next_day(day)) {
    DailyTally tally;
    tally.date = day;
    for (const Entity* entity : lexicon.group(group)) tally.counts[entity->id] = 0;
    index.emplace(day, tallies.size());
    tallies.push_back(std::move(tally));
    if (!(day < last)) break;
  }

  for (const auto& row : rows) {
    const Entity* entity = lexicon.find(row.entity_id);
    if (entity == nullptr) {
      throw ConsistencyError("mention entity '" + row.entity_id + "' is not in the lexicon");
    }
    if (entity->kind != group) continue;
    auto day = index.find(row.bucket_date);
    if (day == index.end()) continue;  // outside the window
    tallies[day->second].counts[row.entity_id] += row.count;
  }

  return tallies;
}

ShareTable compute_shares(const std::vector<DailyTally>& tallies, EntityKind group,
                          std::vector<std::string> entity_order) {
  ShareTable table;
  table.group = group;
  table.entity_ids = std::move(entity_order);

  for (const auto& tally : tallies) {
    std::int64_t total = 0;
    for (const auto& id : table.entity_ids) {
      auto it = tally.counts.find(id);
      if (it != tally.counts.end()) total += it->second;
    }
    ShareTable::Row row;
    row.date = tally.date;
    row.shares.reserve(table.entity_ids.size());
    for (const auto& id : table.entity_ids) {
      if (total == 0) {
        row.shares.push_back(std::nullopt);
        continue;
      }
      auto it = tally.counts.find(id);
      std::int64_t count = (it == tally.counts.end()) ? 0 : it->second;
      row.shares.push_back(static_cast<double>(count) / static_cast<double>(total) * 100.0);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::pair<CivilDate, std::optional<double>>> share_row_sums(const ShareTable& table) {
  std::vector<std::pair<CivilDate, std::optional<double>>> sums;
  sums.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    std::optional<double> sum;
    for (const auto& share : row.shares) {
      if (!share) continue;
      sum = sum.value_or(0.0) + *share;
    }
    sums.emplace_back(row.date, sum);
  }
  return sums;
}

std::vector<ChangeRow> relative_change(const ShareTable& table, CivilDate first_date,
                                       CivilDate last_date) {
  const ShareTable::Row* first_row = nullptr;
  const ShareTable::Row* last_row = nullptr;
  for (const auto& row : table.rows) {
    if (row.date == first_date) first_row = &row;
    if (row.date == last_date) last_row = &row;
  }
  if (first_row == nullptr) {
    throw ArgumentError("date " + to_string(first_date) + " is not in the share table");
  }
  if (last_row == nullptr) {
    throw ArgumentError("date " + to_string(last_date) + " is not in the share table");
  }

  std::vector<ChangeRow> changes;
  changes.reserve(table.entity_ids.size());
  for (std::size_t i = 0; i < table.entity_ids.size(); ++i) {
    ChangeRow change;
    change.entity_id = table.entity_ids[i];
    change.first_share = first_row->shares[i];
    change.last_share = last_row->shares[i];
    if (change.first_share && change.last_share && *change.first_share > 0.0) {
      change.relative_change =
          (*change.last_share - *change.first_share) / *change.first_share * 100.0;
    }
    changes.push_back(std::move(change));
  }
  return changes;
}

std::vector<SeatDelta> seat_delta(const std::vector<SeatRecord>& records) {
  std::vector<SeatDelta> deltas;
  deltas.reserve(records.size());
  for (const auto& record : records) {
    deltas.push_back(SeatDelta{record.party_id, record.seats_november - record.seats_april});
  }
  return deltas;
}

std::vector<PollComparisonRow> poll_comparison(const std::vector<PollRange>& polls,
                                               const std::vector<SeatRecord>& records) {
  std::set<std::string> seat_ids;
  for (const auto& record : records) seat_ids.insert(record.party_id);
  std::set<std::string> poll_ids;
  for (const auto& poll : polls) poll_ids.insert(poll.party_id);
  for (const auto& id : poll_ids) {
    if (seat_ids.count(id) == 0) {
      throw AlignmentError("poll for '" + id + "' has no seat record");
    }
  }
  for (const auto& id : seat_ids) {
    if (poll_ids.count(id) == 0) {
      throw AlignmentError("seat record for '" + id + "' has no poll range");
    }
  }

  std::vector<PollComparisonRow> out;
  out.reserve(polls.size());
  for (const auto& poll : polls) {
    auto record = std::find_if(records.begin(), records.end(),
                               [&](const SeatRecord& r) { return r.party_id == poll.party_id; });
    PollComparisonRow row;
    row.party_id = poll.party_id;
    row.november_seats = record->seats_november;
    row.poll_low = poll.low;
    row.poll_high = poll.high;
    row.within_range = poll.low <= record->seats_november && record->seats_november <= poll.high;
    if (!row.within_range) {
      row.miss_distance = (record->seats_november < poll.low)
                              ? poll.low - record->seats_november
                              : record->seats_november - poll.high;
    }
    out.push_back(row);
  }
  return out;
}

namespace {

int parse_int_entry(const ConfBlock& block, std::string_view key) {
  std::string text = block.require(key);
  char* end = nullptr;
  long value = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw ParseError("'" + std::string(key) + "' must be an integer, got '" + text + "'",
                     block.line);
  }
  return static_cast<int>(value);
}

}  // namespace

ElectionFixture load_election_fixture(std::string_view config_text) {
  ElectionFixture fixture;
  std::set<std::string> seen;
  for (const auto& block : parse_conf(config_text)) {
    if (block.name != "party") {
      throw ParseError("unknown block [" + block.name + "] in election fixture", block.line);
    }
    std::string id = block.require("id");
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate party '" + id + "' in election fixture");
    }
    SeatRecord seats;
    seats.party_id = id;
    seats.seats_april = parse_int_entry(block, "seats_april");
    seats.seats_november = parse_int_entry(block, "seats_november");
    if (seats.seats_april < 0 || seats.seats_november < 0) {
      throw ValidationError("negative seat count for '" + id + "'");
    }
    fixture.seats.push_back(seats);

    bool has_low = block.get("poll_low").has_value();
    bool has_high = block.get("poll_high").has_value();
    if (has_low != has_high) {
      throw ValidationError("party '" + id + "' must set both poll_low and poll_high");
    }
    if (has_low) {
      PollRange poll;
      poll.party_id = id;
      poll.low = parse_int_entry(block, "poll_low");
      poll.high = parse_int_entry(block, "poll_high");
      if (poll.high < poll.low) {
        throw ValidationError("poll range inverted for '" + id + "'");
      }
      fixture.polls.push_back(poll);
    }
  }
  return fixture;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(pos));
      break;
    }
    fields.emplace_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  for (auto& field : fields) {
    std::size_t b = field.find_first_not_of(" \t\r");
    std::size_t e = field.find_last_not_of(" \t\r");
    field = (b == std::string::npos) ? "" : field.substr(b, e - b + 1);
  }
  return fields;
}

}  // namespace

std::vector<ShareTable> load_share_tables_csv(std::string_view csv_text) {
  struct Cell {
    CivilDate date;
    std::string entity_id;
    double share = 0.0;
  };
  std::map<std::string, std::vector<Cell>> cells_by_group;
  std::map<std::string, std::vector<std::string>> order_by_group;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < csv_text.size()) {
    std::size_t eol = csv_text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos) ? csv_text.substr(pos)
                                                            : csv_text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? csv_text.size() : eol + 1;
    ++line_no;

    bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;
    if (blank || line.front() == '#') continue;

    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "group" || fields[1] != "date" ||
          fields[2] != "entity_id" || fields[3] != "share") {
        throw ParseError("expected header 'group,date,entity_id,share'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    }
    const std::string& group = fields[0];
    if (group != "parties" && group != "leaders") {
      throw ParseError("group must be 'parties' or 'leaders', got '" + group + "'", line_no);
    }
    auto date = parse_date(fields[1]);
    if (!date) throw ParseError("bad date '" + fields[1] + "'", line_no);
    if (fields[2].empty()) throw ParseError("empty entity_id", line_no);
    char* end = nullptr;
    double share = std::strtod(fields[3].c_str(), &end);
    if (end == fields[3].c_str() || *end != '\0') {
      throw ParseError("bad share value '" + fields[3] + "'", line_no);
    }
    if (share < 0.0) throw ParseError("negative share for '" + fields[2] + "'", line_no);

    auto& order = order_by_group[group];
    if (std::find(order.begin(), order.end(), fields[2]) == order.end()) {
      order.push_back(fields[2]);
    }
    for (const auto& cell : cells_by_group[group]) {
      if (cell.date == *date && cell.entity_id == fields[2]) {
        throw ParseError("duplicate cell for " + group + "/" + fields[1] + "/" + fields[2],
                         line_no);
      }
    }
    cells_by_group[group].push_back(Cell{*date, fields[2], share});
  }
  if (!header_seen) throw ParseError("empty share table document", 1);

  std::vector<ShareTable> tables;
  for (const char* group_name : {"parties", "leaders"}) {
    auto it = cells_by_group.find(group_name);
    if (it == cells_by_group.end()) continue;

    ShareTable table;
    table.group =
        (std::string_view(group_name) == "parties") ? EntityKind::party : EntityKind::leader;
    table.entity_ids = order_by_group[group_name];

    std::set<CivilDate> dates;
    for (const auto& cell : it->second) dates.insert(cell.date);
    for (CivilDate date : dates) {
      ShareTable::Row row;
      row.date = date;
      row.shares.assign(table.entity_ids.size(), std::nullopt);
      table.rows.push_back(std::move(row));
    }
    std::map<CivilDate, std::size_t> row_index;
    for (std::size_t i = 0; i < table.rows.size(); ++i) row_index[table.rows[i].date] = i;
    std::map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < table.entity_ids.size(); ++i)
      column_index[table.entity_ids[i]] = i;

    for (const auto& cell : it->second) {
      table.rows[row_index[cell.date]].shares[column_index[cell.entity_id]] = cell.share;
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace mediapulse
