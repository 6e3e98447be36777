#include "mediapulse/html_text.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <unordered_map>

#include "mediapulse/utf8.hpp"

namespace mediapulse {

namespace {

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> kEntities = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
      {"apos", '\''},    {"nbsp", ' '},     {"shy", 0xAD},
      {"aacute", 0xE1},  {"eacute", 0xE9},  {"iacute", 0xED},  {"oacute", 0xF3},
      {"uacute", 0xFA},  {"ntilde", 0xF1},  {"uuml", 0xFC},    {"ccedil", 0xE7},
      {"Aacute", 0xC1},  {"Eacute", 0xC9},  {"Iacute", 0xCD},  {"Oacute", 0xD3},
      {"Uacute", 0xDA},  {"Ntilde", 0xD1},  {"Uuml", 0xDC},    {"Ccedil", 0xC7},
      {"agrave", 0xE0},  {"egrave", 0xE8},  {"igrave", 0xEC},  {"ograve", 0xF2},
      {"ugrave", 0xF9},  {"iexcl", 0xA1},   {"iquest", 0xBF},  {"ordf", 0xAA},
      {"ordm", 0xBA},    {"laquo", 0xAB},   {"raquo", 0xBB},   {"middot", 0xB7},
      {"deg", 0xB0},     {"euro", 0x20AC},  {"copy", 0xA9},    {"reg", 0xAE},
      {"trade", 0x2122}, {"ndash", 0x2013}, {"mdash", 0x2014}, {"hellip", 0x2026},
      {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
      {"bull", 0x2022},  {"times", 0xD7},   {"divide", 0xF7},  {"oelig", 0x153},
      {"szlig", 0xDF},   {"auml", 0xE4},    {"euml", 0xEB},    {"iuml", 0xEF},
      {"ouml", 0xF6},    {"acirc", 0xE2},   {"ecirc", 0xEA},   {"icirc", 0xEE},
      {"ocirc", 0xF4},   {"ucirc", 0xFB},
  };
  return kEntities;
}

bool is_block_tag(std::string_view tag) {
  static constexpr std::array<std::string_view, 46> kBlocks = {
      "address", "article", "aside",    "blockquote", "body",    "br",      "canvas",
      "caption", "center",  "dd",       "details",    "div",     "dl",      "dt",
      "fieldset", "figcaption", "figure", "footer",   "form",    "h1",      "h2",
      "h3",      "h4",      "h5",       "h6",         "head",    "header",  "hr",
      "html",    "li",      "main",     "menu",       "nav",     "ol",      "option",
      "p",       "pre",     "section",  "select",     "summary", "table",   "tbody",
      "td",      "th",      "thead",    "tr"};
  for (auto block : kBlocks) {
    if (tag == block) return true;
  }
  return tag == "ul" || tag == "tfoot" || tag == "title";
}

// script/style/template bodies are raw text: everything until the matching
// close tag is discarded, exactly like a browser tokenizer.
bool is_raw_text_tag(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "template";
}

bool ascii_ieq(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

// Sanitizes a raw byte span to valid UTF-8 and appends it through the
// whitespace-tracking emitter.
class TextEmitter {
 public:
  explicit TextEmitter(std::string& out) : out_(out) {}

  void text(std::string_view raw) {
    std::size_t pos = 0;
    while (pos < raw.size()) {
      std::uint32_t cp = utf8::next_codepoint(raw, pos);
      codepoint(cp);
    }
  }

  void codepoint(std::uint32_t cp) {
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v') {
      if (!out_.empty() && !pending_newline_) pending_space_ = true;
      return;
    }
    if (pending_newline_) {
      out_.push_back('\n');
      pending_newline_ = false;
      pending_space_ = false;
    } else if (pending_space_) {
      out_.push_back(' ');
      pending_space_ = false;
    }
    utf8::append_codepoint(out_, cp);
  }

  void block_boundary() {
    if (!out_.empty()) pending_newline_ = true;
    pending_space_ = false;
  }

 private:
  std::string& out_;
  bool pending_space_ = false;
  bool pending_newline_ = false;
};

// Parses a character reference starting at the '&'. On success advances
// `pos` past the ';' and returns the code point; otherwise the '&' is
// literal text.
std::optional<std::uint32_t> parse_entity(std::string_view html, std::size_t& pos) {
  std::size_t semi = html.find(';', pos + 1);
  if (semi == std::string_view::npos || semi == pos + 1 || semi - pos > 12) return std::nullopt;
  std::string_view name = html.substr(pos + 1, semi - pos - 1);

  std::uint32_t cp = 0;
  if (name[0] == '#') {
    std::size_t i = 1;
    bool hex = i < name.size() && (name[i] == 'x' || name[i] == 'X');
    if (hex) ++i;
    if (i >= name.size()) return std::nullopt;
    for (; i < name.size(); ++i) {
      char c = name[i];
      int digit;
      if (c >= '0' && c <= '9') digit = c - '0';
      else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      else return std::nullopt;
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(digit);
      if (cp > 0x10FFFF) return std::nullopt;
    }
    if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = utf8::kReplacement;
  } else {
    auto it = named_entities().find(name);
    if (it == named_entities().end()) return std::nullopt;
    cp = it->second;
  }
  pos = semi + 1;
  return cp;
}

// Extracts the tag name after '<' or '</'. Empty when malformed.
std::string read_tag_name(std::string_view html, std::size_t pos) {
  std::string name;
  while (pos < html.size()) {
    char c = html[pos];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':') {
      name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++pos;
    } else {
      break;
    }
  }
  return name;
}

// Advances past the closing '>' of a tag, honoring quoted attribute values.
// Returns npos when the tag never closes.
std::size_t skip_tag(std::string_view html, std::size_t pos) {
  char quote = 0;
  while (pos < html.size()) {
    char c = html[pos];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return pos + 1;
    }
    ++pos;
  }
  return std::string_view::npos;
}

}  // namespace

std::string extract_text(std::string_view html) {
  std::string out;
  out.reserve(html.size() / 4);
  TextEmitter emit(out);

  std::size_t pos = 0;
  while (pos < html.size()) {
    char c = html[pos];
    if (c != '<') {
      if (c == '&') {
        if (auto cp = parse_entity(html, pos)) {
          emit.codepoint(*cp);
          continue;
        }
      }
      emit.codepoint(utf8::next_codepoint(html, pos));
      continue;
    }

    // '<' not opening markup is literal text ("3 < 4").
    if (pos + 1 >= html.size()) {
      emit.codepoint('<');
      ++pos;
      continue;
    }
    char next = html[pos + 1];
    bool is_markup = std::isalpha(static_cast<unsigned char>(next)) || next == '/' ||
                     next == '!' || next == '?';
    if (!is_markup) {
      emit.codepoint('<');
      ++pos;
      continue;
    }

    if (html.compare(pos, 4, "<!--") == 0) {
      std::size_t end = html.find("-->", pos + 4);
      pos = (end == std::string_view::npos) ? html.size() : end + 3;
      continue;
    }
    if (html.compare(pos, 9, "<![CDATA[") == 0) {
      std::size_t end = html.find("]]>", pos + 9);
      std::size_t content_end = (end == std::string_view::npos) ? html.size() : end;
      emit.text(html.substr(pos + 9, content_end - pos - 9));
      pos = (end == std::string_view::npos) ? html.size() : end + 3;
      continue;
    }
    if (next == '!' || next == '?') {
      std::size_t end = skip_tag(html, pos + 1);
      pos = (end == std::string_view::npos) ? html.size() : end;
      continue;
    }

    bool closing = next == '/';
    std::string name = read_tag_name(html, pos + (closing ? 2 : 1));
    std::size_t end = skip_tag(html, pos + 1);
    if (name.empty() || end == std::string_view::npos) {
      // Unterminated or nameless tag: drop the rest, it cannot be text.
      if (end == std::string_view::npos) break;
      pos = end;
      continue;
    }
    pos = end;

    if (!closing && is_raw_text_tag(name)) {
      // Swallow everything up to the matching close tag.
      std::size_t search = pos;
      std::size_t resume = html.size();
      while (search + 2 + name.size() <= html.size()) {
        std::size_t candidate = html.find("</", search);
        if (candidate == std::string_view::npos) break;
        std::size_t name_end = candidate + 2 + name.size();
        bool name_matches = name_end <= html.size() &&
                            ascii_ieq(html.substr(candidate + 2, name.size()), name) &&
                            (name_end == html.size() ||
                             !std::isalnum(static_cast<unsigned char>(html[name_end])));
        if (name_matches) {
          std::size_t close_end = skip_tag(html, candidate + 1);
          resume = (close_end == std::string_view::npos) ? html.size() : close_end;
          break;
        }
        search = candidate + 2;
      }
      pos = resume;
      emit.block_boundary();
      continue;
    }

    if (is_block_tag(name)) emit.block_boundary();
  }

  return out;
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == '&') {
      if (auto cp = parse_entity(text, pos)) {
        utf8::append_codepoint(out, *cp);
        continue;
      }
    }
    utf8::append_codepoint(out, utf8::next_codepoint(text, pos));
  }
  return out;
}

}  // namespace mediapulse
