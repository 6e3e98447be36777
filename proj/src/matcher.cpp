#include "mediapulse/matcher.hpp"

#include <deque>
#include <set>

#include "mediapulse/errors.hpp"
#include "mediapulse/hash.hpp"

namespace mediapulse {

namespace {

std::vector<std::string> normalized_tokens(const std::string& surface,
                                           const NormalizationPolicy& policy) {
  std::vector<std::string> out;
  for (auto& token : tokenize(normalize_text(surface, policy))) out.push_back(std::move(token.text));
  return out;
}

}  // namespace

CompiledMatcher compile(const Lexicon& lexicon, const NormalizationPolicy& policy) {
  CompiledMatcher matcher;
  matcher.policy_ = policy;
  matcher.nodes_.emplace_back();  // root

  // Pattern set per entity: unique normalized token sequences.
  std::map<std::vector<std::string>, std::size_t> owner_by_pattern;
  std::vector<std::pair<std::vector<std::string>, std::size_t>> patterns;

  for (const auto& entity : lexicon.entities()) {
    std::size_t entity_index = matcher.entity_ids_.size();
    matcher.entity_ids_.push_back(entity.id);
    for (const auto& alias : entity.aliases) {
      auto tokens = normalized_tokens(alias.surface, policy);
      if (tokens.empty()) {
        throw ValidationError("alias '" + alias.surface + "' of entity '" + entity.id +
                              "' normalizes to nothing under the matcher policy");
      }
      auto [it, inserted] = owner_by_pattern.emplace(tokens, entity_index);
      if (!inserted) {
        if (it->second != entity_index) {
          throw AmbiguityError("aliases of '" + matcher.entity_ids_[it->second] + "' and '" +
                               entity.id + "' collide after normalization on '" +
                               alias.surface + "'");
        }
        continue;  // duplicate surface within one entity: one pattern
      }
      patterns.emplace_back(std::move(tokens), entity_index);
    }
  }
  matcher.pattern_total_ = patterns.size();

  // Trie construction over interned tokens.
  for (const auto& [tokens, entity_index] : patterns) {
    std::int32_t node = 0;
    for (const auto& token : tokens) {
      auto [it, _] = matcher.token_ids_.emplace(
          token, static_cast<std::int32_t>(matcher.token_ids_.size()));
      std::int32_t symbol = it->second;
      auto child = matcher.nodes_[static_cast<std::size_t>(node)].children.find(symbol);
      if (child == matcher.nodes_[static_cast<std::size_t>(node)].children.end()) {
        std::int32_t next = static_cast<std::int32_t>(matcher.nodes_.size());
        matcher.nodes_[static_cast<std::size_t>(node)].children.emplace(symbol, next);
        matcher.nodes_.emplace_back();
        node = next;
      } else {
        node = child->second;
      }
    }
    auto& terminal = matcher.nodes_[static_cast<std::size_t>(node)];
    terminal.entity_index = static_cast<std::int32_t>(entity_index);
    terminal.depth = static_cast<std::int32_t>(tokens.size());
  }

  // Suffix and output links, breadth first.
  std::deque<std::int32_t> queue;
  for (auto& [symbol, child] : matcher.nodes_[0].children) {
    matcher.nodes_[static_cast<std::size_t>(child)].suffix = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    std::int32_t current = queue.front();
    queue.pop_front();
    const auto& current_node = matcher.nodes_[static_cast<std::size_t>(current)];
    std::int32_t suffix = current_node.suffix;
    matcher.nodes_[static_cast<std::size_t>(current)].output =
        matcher.nodes_[static_cast<std::size_t>(suffix)].entity_index >= 0
            ? suffix
            : matcher.nodes_[static_cast<std::size_t>(suffix)].output;

    for (auto& [symbol, child] : current_node.children) {
      std::int32_t probe = current_node.suffix;
      std::int32_t link = 0;
      while (true) {
        const auto& probe_node = matcher.nodes_[static_cast<std::size_t>(probe)];
        auto it = probe_node.children.find(symbol);
        if (it != probe_node.children.end() && it->second != child) {
          link = it->second;
          break;
        }
        if (probe == 0) break;
        probe = probe_node.suffix;
      }
      matcher.nodes_[static_cast<std::size_t>(child)].suffix = link;
      queue.push_back(child);
    }
  }

  // Version digest: policy plus the semantic pattern set in declaration order.
  std::string canon;
  canon += policy.case_fold ? "cf1;" : "cf0;";
  canon += policy.strip_diacritics ? "sd1;" : "sd0;";
  canon += policy.collapse_whitespace ? "cw1;" : "cw0;";
  for (const auto& entity : lexicon.entities()) {
    canon += entity.id;
    canon.push_back('\x1d');
    canon += to_string(entity.kind);
    canon.push_back('\x1d');
    std::set<std::string> keys;
    for (const auto& alias : entity.aliases) {
      std::string key;
      for (const auto& token : normalized_tokens(alias.surface, policy)) {
        if (!key.empty()) key.push_back(' ');
        key += token;
      }
      keys.insert(std::move(key));
    }
    for (const auto& key : keys) {
      canon += key;
      canon.push_back('\x1e');
    }
    canon.push_back('\x1f');
  }
  matcher.version_ = hex_digest(canon);

  return matcher;
}

std::vector<CompiledMatcher::Match> CompiledMatcher::find_matches(std::string_view raw_text) const {
  std::vector<Match> selected;
  if (nodes_.size() <= 1) return selected;

  std::string normalized = normalize_text(raw_text, policy_);
  std::vector<Token> tokens = tokenize(normalized);
  if (tokens.empty()) return selected;

  // Longest candidate starting at each token index.
  struct Candidate {
    std::int32_t length = 0;
    std::int32_t entity_index = -1;
  };
  std::vector<Candidate> best(tokens.size());

  std::int32_t state = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto symbol_it = token_ids_.find(tokens[i].text);
    if (symbol_it == token_ids_.end()) {
      // Token not in any alias: no pattern can span it.
      state = 0;
      continue;
    }
    std::int32_t symbol = symbol_it->second;
    while (true) {
      const auto& node = nodes_[static_cast<std::size_t>(state)];
      auto child = node.children.find(symbol);
      if (child != node.children.end()) {
        state = child->second;
        break;
      }
      if (state == 0) break;
      state = node.suffix;
    }

    // Every pattern ending at i, via the output chain.
    for (std::int32_t terminal = nodes_[static_cast<std::size_t>(state)].entity_index >= 0
                                     ? state
                                     : nodes_[static_cast<std::size_t>(state)].output;
         terminal >= 0; terminal = nodes_[static_cast<std::size_t>(terminal)].output) {
      const auto& node = nodes_[static_cast<std::size_t>(terminal)];
      std::size_t start = i + 1 - static_cast<std::size_t>(node.depth);
      if (node.depth > best[start].length) {
        best[start] = Candidate{node.depth, node.entity_index};
      }
    }
  }

  // Greedy left-to-right: longest match at a position consumes its tokens.
  std::size_t cursor = 0;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    if (start < cursor || best[start].length == 0) continue;
    selected.push_back(Match{start, static_cast<std::size_t>(best[start].length),
                             static_cast<std::size_t>(best[start].entity_index)});
    cursor = start + static_cast<std::size_t>(best[start].length);
  }
  return selected;
}

MentionCounts count_mentions(std::string_view text, const CompiledMatcher& matcher) {
  MentionCounts counts;
  for (const auto& id : matcher.entity_ids()) counts[id] = 0;
  for (const auto& match : matcher.find_matches(text)) {
    counts[matcher.entity_ids()[match.entity_index]] += 1;
  }
  return counts;
}

}  // namespace mediapulse
