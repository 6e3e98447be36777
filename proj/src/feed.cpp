#include "mediapulse/feed.hpp"

#include <cctype>
#include <map>
#include <set>

#include "mediapulse/conf.hpp"
#include "mediapulse/errors.hpp"
#include "mediapulse/html_text.hpp"
#include "mediapulse/url.hpp"

namespace mediapulse {

std::vector<FeedSource> load_roster(std::string_view config_text) {
  std::vector<FeedSource> roster;
  std::set<std::string> seen;
  for (const auto& block : parse_conf(config_text)) {
    if (block.name != "source") {
      throw ParseError("unknown block [" + block.name + "] in roster file", block.line);
    }
    FeedSource source;
    source.source_id = block.require("id");
    source.name = block.get("name").value_or(source.source_id);
    source.feed_url = block.require("feed_url");
    if (!seen.insert(source.source_id).second) {
      throw ValidationError("duplicate source id '" + source.source_id + "'");
    }
    auto url = parse_url(source.feed_url);
    if (!url || (url->scheme != "http" && url->scheme != "https")) {
      throw ValidationError("source '" + source.source_id + "' has a non-absolute feed_url '" +
                            source.feed_url + "'");
    }
    roster.push_back(std::move(source));
  }
  return roster;
}

namespace {

// Minimal tolerant XML pull tokenizer: enough structure for RSS and Atom,
// forgiving about everything else.
struct XmlEvent {
  enum class Kind { start, end, text } kind = Kind::text;
  std::string name;                          // lowercased local name
  std::map<std::string, std::string> attrs;  // lowercased names, decoded values
  std::string text;                          // decoded character data
  bool self_closing = false;
};

class XmlTokenizer {
 public:
  explicit XmlTokenizer(std::string_view input) : input_(input) {}

  std::optional<XmlEvent> next() {
    while (pos_ < input_.size()) {
      if (input_[pos_] != '<') {
        std::size_t lt = input_.find('<', pos_);
        if (lt == std::string_view::npos) lt = input_.size();
        std::string_view raw = input_.substr(pos_, lt - pos_);
        pos_ = lt;
        if (raw.find_first_not_of(" \t\r\n") == std::string_view::npos) continue;
        XmlEvent event;
        event.kind = XmlEvent::Kind::text;
        event.text = decode_entities(raw);
        return event;
      }
      if (input_.compare(pos_, 4, "<!--") == 0) {
        std::size_t end = input_.find("-->", pos_ + 4);
        pos_ = (end == std::string_view::npos) ? input_.size() : end + 3;
        continue;
      }
      if (input_.compare(pos_, 9, "<![CDATA[") == 0) {
        std::size_t end = input_.find("]]>", pos_ + 9);
        std::size_t stop = (end == std::string_view::npos) ? input_.size() : end;
        XmlEvent event;
        event.kind = XmlEvent::Kind::text;
        event.text.assign(input_.substr(pos_ + 9, stop - pos_ - 9));
        pos_ = (end == std::string_view::npos) ? input_.size() : end + 3;
        return event;
      }
      if (pos_ + 1 < input_.size() && (input_[pos_ + 1] == '!' || input_[pos_ + 1] == '?')) {
        pos_ = skip_past_gt(pos_ + 1);
        continue;
      }
      if (pos_ + 1 < input_.size() && input_[pos_ + 1] == '/') {
        XmlEvent event;
        event.kind = XmlEvent::Kind::end;
        event.name = local_name(read_name(pos_ + 2));
        pos_ = skip_past_gt(pos_ + 2);
        if (event.name.empty()) continue;
        return event;
      }
      if (pos_ + 1 < input_.size() &&
          (std::isalpha(static_cast<unsigned char>(input_[pos_ + 1])) || input_[pos_ + 1] == '_')) {
        return read_start_tag();
      }
      // Stray '<' in malformed feeds: treat as text noise.
      ++pos_;
    }
    return std::nullopt;
  }

 private:
  std::size_t skip_past_gt(std::size_t from) {
    char quote = 0;
    while (from < input_.size()) {
      char c = input_[from];
      if (quote != 0) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        return from + 1;
      }
      ++from;
    }
    return input_.size();
  }

  std::string read_name(std::size_t at) {
    std::string name;
    while (at < input_.size()) {
      char c = input_[at];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' ||
          c == '.') {
        name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        ++at;
      } else {
        break;
      }
    }
    return name;
  }

  static std::string local_name(std::string qualified) {
    std::size_t colon = qualified.rfind(':');
    return (colon == std::string::npos) ? qualified : qualified.substr(colon + 1);
  }

  XmlEvent read_start_tag() {
    XmlEvent event;
    event.kind = XmlEvent::Kind::start;
    std::string qualified = read_name(pos_ + 1);
    std::size_t at = pos_ + 1 + qualified.size();
    event.name = local_name(qualified);

    while (at < input_.size() && input_[at] != '>') {
      if (input_[at] == '/' && at + 1 < input_.size() && input_[at + 1] == '>') {
        event.self_closing = true;
        at += 1;
        break;
      }
      if (std::isspace(static_cast<unsigned char>(input_[at]))) {
        ++at;
        continue;
      }
      std::string attr_name = read_name(at);
      if (attr_name.empty()) {
        ++at;
        continue;
      }
      at += attr_name.size();
      while (at < input_.size() && std::isspace(static_cast<unsigned char>(input_[at]))) ++at;
      std::string value;
      if (at < input_.size() && input_[at] == '=') {
        ++at;
        while (at < input_.size() && std::isspace(static_cast<unsigned char>(input_[at]))) ++at;
        if (at < input_.size() && (input_[at] == '"' || input_[at] == '\'')) {
          char quote = input_[at];
          ++at;
          std::size_t end = input_.find(quote, at);
          if (end == std::string_view::npos) end = input_.size();
          value.assign(input_.substr(at, end - at));
          at = (end == input_.size()) ? end : end + 1;
        } else {
          std::size_t end = at;
          while (end < input_.size() && !std::isspace(static_cast<unsigned char>(input_[end])) &&
                 input_[end] != '>' && input_[end] != '/')
            ++end;
          value.assign(input_.substr(at, end - at));
          at = end;
        }
      }
      event.attrs[local_name(attr_name)] = decode_entities(value);
    }
    pos_ = (at >= input_.size()) ? input_.size() : at + 1;
    return event;
  }

  std::string_view input_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> parse_feed_datetime(const std::string& text) {
  if (auto ts = parse_rfc1123(text)) return ts;
  return parse_iso8601(text);
}

std::string_view trim_view(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Fields accumulated for the entry currently being parsed.
struct PendingItem {
  std::string title;
  std::string link;
  std::string atom_link_alternate;
  std::string atom_link_any;
  std::string summary;
  std::string content;  // Atom <content>, summary fallback
  std::string date_text;
  bool active = false;

  void reset() { *this = PendingItem{}; }
};

}  // namespace

FeedParseResult parse_feed(std::string_view body, const FeedSource& source) {
  XmlTokenizer tokenizer(body);

  // Locate the root element, skipping prolog and junk.
  std::optional<XmlEvent> root;
  while (auto event = tokenizer.next()) {
    if (event->kind == XmlEvent::Kind::start) {
      root = std::move(event);
      break;
    }
  }
  if (!root) {
    throw FeedFormatError("no XML root element found in feed body from '" + source.source_id +
                          "'");
  }
  bool is_rss = root->name == "rss";
  bool is_atom = root->name == "feed";
  if (!is_rss && !is_atom) {
    throw FeedFormatError("root element '" + root->name +
                          "' is neither <rss> nor <feed> (source '" + source.source_id + "')");
  }

  const std::string item_tag = is_rss ? "item" : "entry";
  FeedParseResult result;
  PendingItem pending;
  std::vector<std::string> stack;  // open elements below the root
  std::string text_buffer;

  auto finish_item = [&]() {
    std::string link = pending.link;
    if (link.empty()) link = pending.atom_link_alternate;
    if (link.empty()) link = pending.atom_link_any;
    std::optional<std::string> resolved;
    if (!trim_view(link).empty()) resolved = resolve_url(source.feed_url, link);
    if (!resolved) {
      ++result.items_without_link;
    } else {
      FeedItem item;
      item.link = *resolved;
      item.title = std::string(trim_view(pending.title));
      item.summary = std::string(
          trim_view(pending.summary.empty() ? pending.content : pending.summary));
      if (!pending.date_text.empty()) {
        item.published_at = parse_feed_datetime(std::string(trim_view(pending.date_text)));
      }
      item.source_id = source.source_id;
      result.items.push_back(std::move(item));
    }
    pending.reset();
  };

  while (auto event = tokenizer.next()) {
    switch (event->kind) {
      case XmlEvent::Kind::start: {
        if (event->name == item_tag && !pending.active) {
          pending.active = true;
          if (event->self_closing) {
            finish_item();
            break;
          }
        }
        if (pending.active && is_atom && event->name == "link") {
          auto rel = event->attrs.find("rel");
          auto href = event->attrs.find("href");
          std::string value = (href != event->attrs.end()) ? href->second : "";
          if (!value.empty()) {
            if (rel == event->attrs.end() || rel->second == "alternate") {
              if (pending.atom_link_alternate.empty()) pending.atom_link_alternate = value;
            } else if (pending.atom_link_any.empty()) {
              pending.atom_link_any = value;
            }
          }
        }
        if (!event->self_closing) {
          stack.push_back(event->name);
          text_buffer.clear();
        }
        break;
      }
      case XmlEvent::Kind::text: {
        text_buffer += event->text;
        break;
      }
      case XmlEvent::Kind::end: {
        if (pending.active && !stack.empty()) {
          const std::string& open = stack.back();
          if (open == "title") {
            if (pending.title.empty()) pending.title = text_buffer;
          } else if (open == "link" && is_rss) {
            if (pending.link.empty()) pending.link = text_buffer;
          } else if (open == "description" || open == "summary") {
            if (pending.summary.empty()) pending.summary = text_buffer;
          } else if (open == "content") {
            if (pending.content.empty()) pending.content = text_buffer;
          } else if (open == "pubdate" || open == "published" || open == "updated" ||
                     open == "date") {
            if (pending.date_text.empty()) pending.date_text = text_buffer;
          }
        }
        // Pop to the matching open element; tolerate stray end tags.
        for (std::size_t i = stack.size(); i > 0; --i) {
          if (stack[i - 1] == event->name) {
            stack.resize(i - 1);
            break;
          }
        }
        if (event->name == item_tag && pending.active) finish_item();
        text_buffer.clear();
        break;
      }
    }
  }
  // Feed truncated mid-item: keep what was collected.
  if (pending.active) finish_item();

  return result;
}

}  // namespace mediapulse
