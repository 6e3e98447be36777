#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mediapulse {

// Just enough URL handling for feed crawling: parse, resolve relative
// references, and split into the pieces an HTTP client needs. Fragments are
// always dropped; article identity never includes them.
struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase
  int port = -1;       // -1 = scheme default
  std::string path;    // begins with '/', "/" when absent
  std::string query;   // without the leading '?'

  // "host" or "host:port"; the politeness key.
  std::string host_port() const;
  // Path plus query, the HTTP request target.
  std::string target() const;
  std::string to_string() const;
};

std::optional<Url> parse_url(std::string_view text);

inline bool is_absolute_url(std::string_view text) { return parse_url(text).has_value(); }

// Resolves `ref` against `base` (RFC 3986 subset: absolute, scheme-relative,
// absolute-path, relative-path and query-only references, with dot-segment
// removal). Returns nullopt when base is unusable or the result is not a
// fetchable http(s) URL.
std::optional<std::string> resolve_url(std::string_view base, std::string_view ref);

}  // namespace mediapulse
