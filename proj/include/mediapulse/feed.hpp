#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mediapulse/dates.hpp"

namespace mediapulse {

// One publication on the crawl roster.
struct FeedSource {
  std::string source_id;
  std::string name;
  std::string feed_url;
};

// Parses a roster document:
//
//   [source]
//   id = elpais
//   name = El País
//   feed_url = https://elpais.com/rss/elpais/portada.xml
//
// Validates unique ids and absolute http(s) feed URLs.
std::vector<FeedSource> load_roster(std::string_view config_text);

// One feed entry pointing at an article page.
struct FeedItem {
  std::string link;  // absolute, resolved against the feed URL
  std::string title;
  std::string summary;  // empty when the feed gives none
  std::optional<Timestamp> published_at;
  std::string source_id;
};

struct FeedParseResult {
  std::vector<FeedItem> items;       // document order
  std::size_t items_without_link = 0;  // dropped entries
};

// Parses RSS 2.0 (<rss><channel><item>) and Atom (<feed><entry>) bodies.
// Relative links are resolved against the feed URL; entries without a usable
// link are dropped and counted. Throws FeedFormatError when the body has no
// XML root element or the root is neither <rss> nor <feed> (the message
// names the root that was found).
FeedParseResult parse_feed(std::string_view body, const FeedSource& source);

}  // namespace mediapulse
