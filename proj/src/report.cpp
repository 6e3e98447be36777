#include "mediapulse/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace mediapulse {

std::optional<OutputFormat> output_format_from_string(std::string_view text) {
  if (text == "markdown") return OutputFormat::markdown;
  if (text == "csv") return OutputFormat::csv;
  if (text == "structured") return OutputFormat::structured;
  return std::nullopt;
}

std::optional<DecimalSeparator> decimal_separator_from_string(std::string_view text) {
  if (text == "dot") return DecimalSeparator::dot;
  if (text == "comma") return DecimalSeparator::comma;
  return std::nullopt;
}

std::string format_fixed2(std::optional<double> value, DecimalSeparator decimal) {
  if (!value) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", *value);
  std::string out = buf;
  if (out == "-0.00") out = "0.00";
  if (decimal == DecimalSeparator::comma) {
    auto dot = out.find('.');
    if (dot != std::string::npos) out[dot] = ',';
  }
  return out;
}

namespace {

constexpr std::string_view kUndefined = "—";  // em dash

std::string label_for(const ReportInputs& inputs, const std::string& id) {
  auto it = inputs.display_names.find(id);
  return (it == inputs.display_names.end()) ? id : it->second;
}

std::string_view group_name(EntityKind kind) {
  return kind == EntityKind::party ? "parties" : "leaders";
}

// ---- markdown ----

void markdown_share_table(std::string& out, const ReportInputs& inputs, const ShareTable& table,
                          DecimalSeparator decimal) {
  out += "## Mention share by day — ";
  out += group_name(table.group);
  out += "\n\n";
  out += "| date |";
  for (const auto& id : table.entity_ids) out += " " + label_for(inputs, id) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < table.entity_ids.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& row : table.rows) {
    out += "| " + to_string(row.date) + " |";
    for (const auto& share : row.shares) {
      std::string cell = format_fixed2(share, decimal);
      out += " " + (cell.empty() ? std::string(kUndefined) : cell) + " |";
    }
    out += "\n";
  }
  out += "\n";
}

void markdown_changes(std::string& out, const ReportInputs& inputs,
                      const std::vector<ChangeRow>& changes, EntityKind kind,
                      DecimalSeparator decimal) {
  out += "## Share change, first to last day — ";
  out += group_name(kind);
  out += "\n\n";
  out += "| entity | first share | last share | relative change % |\n|---|---|---|---|\n";
  for (const auto& change : changes) {
    auto cell = [&](std::optional<double> v) {
      std::string s = format_fixed2(v, decimal);
      return s.empty() ? std::string(kUndefined) : s;
    };
    out += "| " + label_for(inputs, change.entity_id) + " | " + cell(change.first_share) +
           " | " + cell(change.last_share) + " | " + cell(change.relative_change) + " |\n";
  }
  out += "\n";
}

std::string render_markdown(const ReportInputs& inputs, DecimalSeparator decimal) {
  std::string out;
  out += "# Media visibility report\n\n";
  out += "window: " + to_string(inputs.window_first) + " .. " + to_string(inputs.window_last) +
         "\n\n";

  if (inputs.party_shares) markdown_share_table(out, inputs, *inputs.party_shares, decimal);
  if (inputs.leader_shares) markdown_share_table(out, inputs, *inputs.leader_shares, decimal);
  if (!inputs.party_changes.empty()) {
    markdown_changes(out, inputs, inputs.party_changes, EntityKind::party, decimal);
  }
  if (!inputs.leader_changes.empty()) {
    markdown_changes(out, inputs, inputs.leader_changes, EntityKind::leader, decimal);
  }

  if (!inputs.seat_deltas.empty()) {
    out += "## Seats, April vs November\n\n";
    out += "| party | April | November | delta |\n|---|---|---|---|\n";
    for (std::size_t i = 0; i < inputs.seat_deltas.size(); ++i) {
      const auto& delta = inputs.seat_deltas[i];
      const auto& record = inputs.seat_records[i];
      out += "| " + label_for(inputs, delta.party_id) + " | " +
             std::to_string(record.seats_april) + " | " + std::to_string(record.seats_november) +
             " | " + (delta.delta > 0 ? "+" : "") + std::to_string(delta.delta) + " |\n";
    }
    out += "\n";
  }

  if (!inputs.poll_rows.empty()) {
    out += "## November seats vs final poll\n\n";
    out += "| party | seats | poll low | poll high | within range | miss |\n";
    out += "|---|---|---|---|---|---|\n";
    for (const auto& row : inputs.poll_rows) {
      out += "| " + label_for(inputs, row.party_id) + " | " + std::to_string(row.november_seats) +
             " | " + std::to_string(row.poll_low) + " | " + std::to_string(row.poll_high) +
             " | " + (row.within_range ? "yes" : "no") + " | " +
             std::to_string(row.miss_distance) + " |\n";
    }
    out += "\n";
  }

  return out;
}

// ---- csv ----

void csv_share_table(std::string& out, const ShareTable& table, DecimalSeparator decimal) {
  out += "# shares ";
  out += group_name(table.group);
  out += "\ndate";
  for (const auto& id : table.entity_ids) out += "," + id;
  out += "\n";
  for (const auto& row : table.rows) {
    out += to_string(row.date);
    for (const auto& share : row.shares) out += "," + format_fixed2(share, decimal);
    out += "\n";
  }
  out += "\n";
}

void csv_changes(std::string& out, const std::vector<ChangeRow>& changes, EntityKind kind,
                 DecimalSeparator decimal) {
  out += "# changes ";
  out += group_name(kind);
  out += "\nentity,first_share,last_share,relative_change\n";
  for (const auto& change : changes) {
    out += change.entity_id + "," + format_fixed2(change.first_share, decimal) + "," +
           format_fixed2(change.last_share, decimal) + "," +
           format_fixed2(change.relative_change, decimal) + "\n";
  }
  out += "\n";
}

std::string render_csv(const ReportInputs& inputs, DecimalSeparator decimal) {
  std::string out;
  if (inputs.party_shares) csv_share_table(out, *inputs.party_shares, decimal);
  if (inputs.leader_shares) csv_share_table(out, *inputs.leader_shares, decimal);
  if (!inputs.party_changes.empty()) csv_changes(out, inputs.party_changes, EntityKind::party, decimal);
  if (!inputs.leader_changes.empty()) {
    csv_changes(out, inputs.leader_changes, EntityKind::leader, decimal);
  }
  if (!inputs.seat_deltas.empty()) {
    out += "# seat_deltas\nparty,seats_april,seats_november,delta\n";
    for (std::size_t i = 0; i < inputs.seat_deltas.size(); ++i) {
      out += inputs.seat_deltas[i].party_id + "," +
             std::to_string(inputs.seat_records[i].seats_april) + "," +
             std::to_string(inputs.seat_records[i].seats_november) + "," +
             std::to_string(inputs.seat_deltas[i].delta) + "\n";
    }
    out += "\n";
  }
  if (!inputs.poll_rows.empty()) {
    out += "# poll_comparison\nparty,november_seats,poll_low,poll_high,within_range,miss_distance\n";
    for (const auto& row : inputs.poll_rows) {
      out += row.party_id + "," + std::to_string(row.november_seats) + "," +
             std::to_string(row.poll_low) + "," + std::to_string(row.poll_high) + "," +
             (row.within_range ? "true" : "false") + "," + std::to_string(row.miss_distance) +
             "\n";
    }
    out += "\n";
  }
  return out;
}

// ---- structured ----

nlohmann::ordered_json share_json(const ShareTable& table) {
  nlohmann::ordered_json node;
  node["entities"] = table.entity_ids;
  node["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json row_node;
    row_node["date"] = to_string(row.date);
    auto shares = nlohmann::ordered_json::array();
    for (const auto& share : row.shares) {
      if (share) {
        // Round once for the wire; full precision stays internal.
        shares.push_back(std::stod(format_fixed2(share, DecimalSeparator::dot)));
      } else {
        shares.push_back(nullptr);
      }
    }
    row_node["shares"] = shares;
    node["rows"].push_back(std::move(row_node));
  }
  return node;
}

nlohmann::ordered_json tallies_json(const std::vector<DailyTally>& tallies) {
  auto node = nlohmann::ordered_json::array();
  for (const auto& tally : tallies) {
    nlohmann::ordered_json row;
    row["date"] = to_string(tally.date);
    nlohmann::ordered_json counts;
    for (const auto& [id, count] : tally.counts) counts[id] = count;
    row["counts"] = std::move(counts);
    node.push_back(std::move(row));
  }
  return node;
}

nlohmann::ordered_json changes_json(const std::vector<ChangeRow>& changes) {
  auto node = nlohmann::ordered_json::array();
  for (const auto& change : changes) {
    nlohmann::ordered_json row;
    row["entity"] = change.entity_id;
    auto number_or_null = [](std::optional<double> v) -> nlohmann::ordered_json {
      if (!v) return nullptr;
      return std::stod(format_fixed2(v, DecimalSeparator::dot));
    };
    row["first_share"] = number_or_null(change.first_share);
    row["last_share"] = number_or_null(change.last_share);
    row["relative_change"] = number_or_null(change.relative_change);
    node.push_back(std::move(row));
  }
  return node;
}

std::string render_structured(const ReportInputs& inputs) {
  nlohmann::ordered_json doc;
  doc["window"] = {{"first", to_string(inputs.window_first)},
                   {"last", to_string(inputs.window_last)}};

  nlohmann::ordered_json shares;
  nlohmann::ordered_json row_sums;
  if (inputs.party_shares) {
    shares["parties"] = share_json(*inputs.party_shares);
    auto sums = nlohmann::ordered_json::array();
    for (const auto& [date, sum] : share_row_sums(*inputs.party_shares)) {
      nlohmann::ordered_json entry;
      entry["date"] = to_string(date);
      entry["sum"] = sum ? nlohmann::ordered_json(std::stod(
                               format_fixed2(sum, DecimalSeparator::dot)))
                         : nlohmann::ordered_json(nullptr);
      sums.push_back(std::move(entry));
    }
    row_sums["parties"] = std::move(sums);
  }
  if (inputs.leader_shares) {
    shares["leaders"] = share_json(*inputs.leader_shares);
    auto sums = nlohmann::ordered_json::array();
    for (const auto& [date, sum] : share_row_sums(*inputs.leader_shares)) {
      nlohmann::ordered_json entry;
      entry["date"] = to_string(date);
      entry["sum"] = sum ? nlohmann::ordered_json(std::stod(
                               format_fixed2(sum, DecimalSeparator::dot)))
                         : nlohmann::ordered_json(nullptr);
      sums.push_back(std::move(entry));
    }
    row_sums["leaders"] = std::move(sums);
  }
  doc["shares"] = std::move(shares);
  doc["share_row_sums"] = std::move(row_sums);

  nlohmann::ordered_json changes;
  if (!inputs.party_changes.empty()) changes["parties"] = changes_json(inputs.party_changes);
  if (!inputs.leader_changes.empty()) changes["leaders"] = changes_json(inputs.leader_changes);
  doc["changes"] = std::move(changes);

  auto deltas = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < inputs.seat_deltas.size(); ++i) {
    nlohmann::ordered_json row;
    row["party"] = inputs.seat_deltas[i].party_id;
    row["seats_april"] = inputs.seat_records[i].seats_april;
    row["seats_november"] = inputs.seat_records[i].seats_november;
    row["delta"] = inputs.seat_deltas[i].delta;
    deltas.push_back(std::move(row));
  }
  doc["seat_deltas"] = std::move(deltas);

  auto polls = nlohmann::ordered_json::array();
  for (const auto& row : inputs.poll_rows) {
    nlohmann::ordered_json node;
    node["party"] = row.party_id;
    node["november_seats"] = row.november_seats;
    node["poll_low"] = row.poll_low;
    node["poll_high"] = row.poll_high;
    node["within_range"] = row.within_range;
    node["miss_distance"] = row.miss_distance;
    polls.push_back(std::move(node));
  }
  doc["poll_comparison"] = std::move(polls);

  nlohmann::ordered_json counts;
  if (!inputs.party_tallies.empty()) counts["parties"] = tallies_json(inputs.party_tallies);
  if (!inputs.leader_tallies.empty()) counts["leaders"] = tallies_json(inputs.leader_tallies);
  doc["daily_counts"] = std::move(counts);

  return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(const ReportInputs& inputs, OutputFormat format,
                          DecimalSeparator decimal) {
  switch (format) {
    case OutputFormat::markdown:
      return render_markdown(inputs, decimal);
    case OutputFormat::csv:
      return render_csv(inputs, decimal);
    case OutputFormat::structured:
      return render_structured(inputs);
  }
  return "";
}

}  // namespace mediapulse
