#include "mediapulse/conf.hpp"

#include "mediapulse/errors.hpp"

namespace mediapulse {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::optional<std::string> ConfBlock::get(std::string_view key) const {
  for (const auto& entry : entries) {
    if (entry.key == key) return entry.value;
  }
  return std::nullopt;
}

std::vector<std::string> ConfBlock::get_all(std::string_view key) const {
  std::vector<std::string> values;
  for (const auto& entry : entries) {
    if (entry.key == key) values.push_back(entry.value);
  }
  return values;
}

std::string ConfBlock::require(std::string_view key) const {
  auto value = get(key);
  if (!value) {
    throw ParseError("[" + name + "] block is missing required key '" + std::string(key) + "'",
                     line);
  }
  return *value;
}

std::vector<ConfBlock> parse_conf(std::string_view text) {
  std::vector<ConfBlock> blocks;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        (eol == std::string_view::npos) ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError("malformed block header '" + std::string(line) + "'", line_no);
      }
      std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ParseError("empty block name", line_no);
      blocks.push_back(ConfBlock{std::string(name), line_no, {}});
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (blocks.empty()) {
      throw ParseError("'" + std::string(key) + "' appears before any [block] header", line_no);
    }
    blocks.back().entries.push_back(ConfEntry{std::string(key), std::string(value), line_no});
  }

  return blocks;
}

}  // namespace mediapulse
