#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mediapulse/lexicon.hpp"
#include "mediapulse/text_norm.hpp"

namespace mediapulse {

// Entity id -> occurrence count. Every lexicon entity is present, zeros
// included.
using MentionCounts = std::map<std::string, std::int64_t>;

// A Lexicon compiled for multi-pattern scanning: an Aho-Corasick automaton
// over interned alias tokens. Immutable after compile() and safe to share
// across threads.
//
// Matching semantics: text is normalized under the compile-time policy and
// tokenized; at each token position the longest matching alias wins and
// consumes its tokens, so nested aliases ("Pablo Iglesias" / "Iglesias")
// never double count.
class CompiledMatcher {
 public:
  struct Match {
    std::size_t token_start = 0;
    std::size_t token_count = 0;
    std::size_t entity_index = 0;  // into entity_ids()
  };

  const NormalizationPolicy& policy() const { return policy_; }
  // Lexicon declaration order.
  const std::vector<std::string>& entity_ids() const { return entity_ids_; }
  std::size_t pattern_count() const { return pattern_total_; }
  // Digest of (policy, entity set, normalized alias sequences); stamped onto
  // mention records so rescans under an edited lexicon never mix silently.
  const std::string& version() const { return version_; }

  // Normalizes `raw_text` internally; already-normalized input is unchanged
  // by re-normalization. Returns the selected non-overlapping matches in
  // left-to-right order.
  std::vector<Match> find_matches(std::string_view raw_text) const;

 private:
  friend CompiledMatcher compile(const Lexicon& lexicon, const NormalizationPolicy& policy);

  struct Node {
    std::unordered_map<std::int32_t, std::int32_t> children;
    std::int32_t suffix = 0;
    std::int32_t output = -1;       // nearest terminal along the suffix chain
    std::int32_t entity_index = -1; // terminal: owning entity
    std::int32_t depth = 0;         // terminal: pattern length in tokens
  };

  NormalizationPolicy policy_;
  std::vector<std::string> entity_ids_;
  std::unordered_map<std::string, std::int32_t> token_ids_;
  std::vector<Node> nodes_;
  std::size_t pattern_total_ = 0;
  std::string version_;
};

// Builds the automaton. Throws AmbiguityError when two aliases of different
// entities collide after normalization under `policy`, ValidationError when
// an alias normalizes to an empty token sequence.
CompiledMatcher compile(const Lexicon& lexicon, const NormalizationPolicy& policy);

// Occurrence counts per entity id, zero-filled for entities with no matches.
MentionCounts count_mentions(std::string_view text, const CompiledMatcher& matcher);

}  // namespace mediapulse
