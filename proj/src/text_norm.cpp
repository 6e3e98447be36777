#include "mediapulse/text_norm.hpp"

#include "mediapulse/utf8.hpp"

namespace mediapulse {

namespace {

using utf8::append_codepoint;
using utf8::next_codepoint;

// Latin-1 accented letters to their base letter, case preserved.
std::uint32_t strip_diacritic(std::uint32_t cp) {
  switch (cp) {
    case 0xC0: case 0xC1: case 0xC2: case 0xC3: case 0xC4: case 0xC5: return 'A';
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5: return 'a';
    case 0xC7: return 'C';
    case 0xE7: return 'c';
    case 0xC8: case 0xC9: case 0xCA: case 0xCB: return 'E';
    case 0xE8: case 0xE9: case 0xEA: case 0xEB: return 'e';
    case 0xCC: case 0xCD: case 0xCE: case 0xCF: return 'I';
    case 0xEC: case 0xED: case 0xEE: case 0xEF: return 'i';
    case 0xD1: return 'N';
    case 0xF1: return 'n';
    case 0xD2: case 0xD3: case 0xD4: case 0xD5: case 0xD6: return 'O';
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: return 'o';
    case 0xD9: case 0xDA: case 0xDB: case 0xDC: return 'U';
    case 0xF9: case 0xFA: case 0xFB: case 0xFC: return 'u';
    case 0xDD: return 'Y';
    case 0xFD: case 0xFF: return 'y';
    default: return cp;
  }
}

std::uint32_t fold_case(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  // Latin-1 uppercase block, skipping the multiplication sign.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;  // Ÿ
  return cp;
}

bool is_space_cp(std::uint32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case 0xA0:    // no-break space
    case 0x1680:
    case 0x2028: case 0x2029:
    case 0x200B:  // zero width space
    case 0x202F: case 0x205F: case 0x3000:
    case 0xFEFF:  // BOM
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Non-ASCII punctuation that must separate tokens even though it is not
// whitespace: Spanish quote and question marks, dashes, ellipsis and the like.
bool is_punct_cp(std::uint32_t cp) {
  switch (cp) {
    case 0xA1:   // ¡
    case 0xAB:   // «
    case 0xB7:   // · (Catalan l·l)
    case 0xBB:   // »
    case 0xBF:   // ¿
    case 0x2026: // …
    case 0x20AC: // €
    case 0xA9: case 0xAE: case 0xB0: case 0xB1: case 0xD7: case 0xF7:
    case 0x2022: case 0x2032: case 0x2033: case 0x2122:
    case 0xFFFD:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x201F);  // dashes and curly quotes
  }
}

}  // namespace

std::string normalize_text(std::string_view raw, const NormalizationPolicy& policy) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  bool emitted_any = false;

  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::uint32_t cp = next_codepoint(raw, pos);
    if (policy.strip_diacritics) cp = strip_diacritic(cp);
    if (policy.case_fold) cp = fold_case(cp);

    if (policy.collapse_whitespace) {
      if (is_space_cp(cp)) {
        pending_space = emitted_any;
        continue;
      }
      if (pending_space) {
        out.push_back(' ');
        pending_space = false;
      }
      emitted_any = true;
    }
    append_codepoint(out, cp);
  }
  return out;
}

std::vector<Token> tokenize(std::string_view normalized) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  std::size_t token_start = 0;
  std::string current;

  auto flush = [&]() {
    if (!current.empty()) {
      tokens.push_back(Token{current, token_start});
      current.clear();
    }
  };

  while (pos < normalized.size()) {
    std::size_t cp_start = pos;
    std::uint32_t cp = next_codepoint(normalized, pos);
    bool is_word = (cp < 0x80)
                       ? ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
                          (cp >= 'A' && cp <= 'Z'))
                       : (!is_space_cp(cp) && !is_punct_cp(cp));
    if (is_word) {
      if (current.empty()) token_start = cp_start;
      current.append(normalized.substr(cp_start, pos - cp_start));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace mediapulse
