#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mediapulse {

// How raw text is canonicalized before alias matching. Spanish headlines are
// inconsistent about accents and casing ("Génova" vs "GENOVA"), so both folds
// default on. Normalization is idempotent under every flag combination.
struct NormalizationPolicy {
  bool case_fold = true;
  bool strip_diacritics = true;
  bool collapse_whitespace = true;

  friend bool operator==(const NormalizationPolicy&, const NormalizationPolicy&) = default;
};

// Applies the policy to UTF-8 text. Invalid byte sequences are replaced with
// U+FFFD; the function never fails.
std::string normalize_text(std::string_view raw, const NormalizationPolicy& policy);

// A word occurrence inside normalized text.
struct Token {
  std::string text;
  std::size_t offset = 0;  // byte offset in the normalized string
};

// Splits normalized text into word tokens. A token is a maximal run of ASCII
// alphanumerics and non-ASCII letters; everything else separates tokens.
// Matching is defined over these tokens, so "Voxel" never matches "Vox".
std::vector<Token> tokenize(std::string_view normalized);

}  // namespace mediapulse
