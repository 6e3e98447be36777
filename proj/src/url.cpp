#include "mediapulse/url.hpp"

#include <cctype>
#include <vector>

namespace mediapulse {

namespace {

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// Collapses "." and ".." segments per RFC 3986 §5.2.4.
std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  bool trailing_slash = !path.empty() && path.back() == '/';
  while (pos < path.size()) {
    while (pos < path.size() && path[pos] == '/') ++pos;
    std::size_t end = path.find('/', pos);
    if (end == std::string_view::npos) end = path.size();
    std::string_view seg = path.substr(pos, end - pos);
    pos = end;
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(seg);
  }
  std::string result;
  for (auto seg : out) {
    result.push_back('/');
    result.append(seg);
  }
  if (result.empty()) return "/";
  if (trailing_slash && result.back() != '/') result.push_back('/');
  return result;
}

void split_path_query(std::string_view rest, Url& url) {
  std::size_t frag = rest.find('#');
  if (frag != std::string_view::npos) rest = rest.substr(0, frag);
  std::size_t q = rest.find('?');
  if (q != std::string_view::npos) {
    url.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  url.path = rest.empty() ? "/" : std::string(rest);
}

}  // namespace

std::string Url::host_port() const {
  if (port < 0) return host;
  return host + ":" + std::to_string(port);
}

std::string Url::target() const {
  if (query.empty()) return path;
  return path + "?" + query;
}

std::string Url::to_string() const {
  std::string out = scheme + "://" + host;
  if (port >= 0) out += ":" + std::to_string(port);
  out += target();
  return out;
}

std::optional<Url> parse_url(std::string_view text) {
  std::size_t scheme_end = text.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  for (char c : text.substr(0, scheme_end)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return std::nullopt;
  }

  Url url;
  url.scheme = to_lower(text.substr(0, scheme_end));
  std::string_view rest = text.substr(scheme_end + 3);

  std::size_t authority_end = rest.find_first_of("/?#");
  std::string_view authority =
      (authority_end == std::string_view::npos) ? rest : rest.substr(0, authority_end);
  if (authority.empty()) return std::nullopt;

  std::size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    std::string_view port_text = authority.substr(colon + 1);
    if (port_text.empty()) return std::nullopt;
    int port = 0;
    for (char c : port_text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      port = port * 10 + (c - '0');
      if (port > 65535) return std::nullopt;
    }
    url.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  url.host = to_lower(authority);

  std::string_view tail =
      (authority_end == std::string_view::npos) ? std::string_view{} : rest.substr(authority_end);
  split_path_query(tail, url);
  url.path = remove_dot_segments(url.path);
  return url;
}

std::optional<std::string> resolve_url(std::string_view base, std::string_view ref) {
  // Strip whitespace that sloppy feeds wrap around links.
  while (!ref.empty() && (ref.front() == ' ' || ref.front() == '\n' || ref.front() == '\r' ||
                          ref.front() == '\t'))
    ref.remove_prefix(1);
  while (!ref.empty() &&
         (ref.back() == ' ' || ref.back() == '\n' || ref.back() == '\r' || ref.back() == '\t'))
    ref.remove_suffix(1);
  if (ref.empty()) return std::nullopt;

  auto finish = [](const Url& url) -> std::optional<std::string> {
    if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
    return url.to_string();
  };

  if (auto absolute = parse_url(ref)) return finish(*absolute);

  // A leading segment with a colon is an absolute URI in some unfetchable
  // scheme (mailto:, javascript:, ...), not a relative path.
  std::size_t colon = ref.find(':');
  std::size_t slash = ref.find('/');
  if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) {
    return std::nullopt;
  }

  auto base_url = parse_url(base);
  if (!base_url) return std::nullopt;

  if (ref.size() >= 2 && ref[0] == '/' && ref[1] == '/') {
    auto scheme_relative = parse_url(base_url->scheme + ":" + std::string(ref));
    if (!scheme_relative) return std::nullopt;
    return finish(*scheme_relative);
  }

  Url out = *base_url;
  out.query.clear();
  if (ref[0] == '/') {
    split_path_query(ref, out);
  } else if (ref[0] == '?') {
    out.path = base_url->path;
    out.query = std::string(ref.substr(1));
    std::size_t frag = out.query.find('#');
    if (frag != std::string::npos) out.query.resize(frag);
  } else if (ref[0] == '#') {
    return std::nullopt;  // fragment-only: no new document
  } else {
    std::string merged = base_url->path;
    std::size_t slash = merged.rfind('/');
    merged = (slash == std::string::npos) ? "/" : merged.substr(0, slash + 1);
    merged += std::string(ref);
    split_path_query(merged, out);
  }
  out.path = remove_dot_segments(out.path);
  return finish(out);
}

}  // namespace mediapulse
