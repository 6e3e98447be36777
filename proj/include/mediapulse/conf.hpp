#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mediapulse {

// One `key = value` line inside a block.
struct ConfEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// A `[name]` section and its entries, in file order. Keys may repeat.
struct ConfBlock {
  std::string name;
  std::size_t line = 0;
  std::vector<ConfEntry> entries;

  std::optional<std::string> get(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;
  // Throws ParseError pointing at the block when the key is absent.
  std::string require(std::string_view key) const;
};

// Parses the block config format used by the lexicon, roster and fixture
// files: `[block]` headers, `key = value` entries, full-line `#` comments.
// Throws ParseError with a 1-based line number on malformed input.
std::vector<ConfBlock> parse_conf(std::string_view text);

}  // namespace mediapulse
