#include "mediapulse/fetch.hpp"

#include <cctype>
#include <chrono>
#include <ctime>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mediapulse/errors.hpp"
#include "mediapulse/hash.hpp"
#include "mediapulse/html_text.hpp"
#include "mediapulse/io.hpp"
#include "mediapulse/url.hpp"

namespace mediapulse {

namespace {

std::string media_type_of(const std::string& content_type_header) {
  std::string media = content_type_header.substr(0, content_type_header.find(';'));
  std::size_t begin = media.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  std::size_t end = media.find_last_not_of(" \t");
  media = media.substr(begin, end - begin + 1);
  for (char& c : media) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return media;
}

bool is_html_media_type(const std::string& media) {
  // Servers that send no content type get the benefit of the doubt.
  return media.empty() || media == "text/html" || media == "application/xhtml+xml";
}

std::chrono::milliseconds backoff_for(const FetchPolicy& policy, int attempt) {
  if (policy.retry_backoff.empty()) return std::chrono::milliseconds{0};
  std::size_t index = std::min(static_cast<std::size_t>(attempt), policy.retry_backoff.size() - 1);
  return policy.retry_backoff[index];
}

}  // namespace

LiveTransport::LiveTransport(FetchPolicy policy) : policy_(std::move(policy)) {}

void LiveTransport::politeness_wait(const std::string& host_port) {
  while (true) {
    std::chrono::steady_clock::time_point wake;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto now = std::chrono::steady_clock::now();
      auto it = next_allowed_.find(host_port);
      if (it == next_allowed_.end() || it->second <= now) {
        // Reserve the slot; the completion handler pushes it further out.
        next_allowed_[host_port] = now + policy_.per_host_delay;
        return;
      }
      wake = it->second;
    }
    std::this_thread::sleep_until(wake);
  }
}

FetchResponse LiveTransport::get(const std::string& url) {
  const int max_hops = 5;
  int attempts = 0;
  std::string last_error;

  for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
    attempts = attempt + 1;
    std::string current = url;
    bool retryable = true;

    for (int hop = 0; hop <= max_hops; ++hop) {
      auto parsed = parse_url(current);
      if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https")) {
        throw FetchError(FetchError::Kind::connect, current, attempts, "unsupported URL");
      }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
      if (parsed->scheme == "https") {
        throw FetchError(FetchError::Kind::connect, current, attempts,
                         "built without TLS support, cannot fetch https URLs");
      }
#endif
      politeness_wait(parsed->host_port());

      std::string origin = parsed->scheme + "://" + parsed->host_port();
      httplib::Client client(origin);
      client.set_connection_timeout(policy_.timeout);
      client.set_read_timeout(policy_.timeout);
      client.set_write_timeout(policy_.timeout);
      client.set_follow_location(false);
      client.set_default_headers({{"User-Agent", policy_.user_agent}});

      std::string body;
      bool too_large = false;
      httplib::Result result = client.Get(
          parsed->target(),
          [&](const char* data, size_t length) {
            if (body.size() + length > policy_.max_body_bytes) {
              too_large = true;
              return false;
            }
            body.append(data, length);
            return true;
          });

      {
        std::lock_guard<std::mutex> lock(mutex_);
        next_allowed_[parsed->host_port()] =
            std::chrono::steady_clock::now() + policy_.per_host_delay;
      }

      if (too_large) {
        throw FetchError(FetchError::Kind::too_large, current, attempts,
                         "body exceeds max_body_bytes (" +
                             std::to_string(policy_.max_body_bytes) + ")");
      }
      if (!result) {
        auto err = result.error();
        bool timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                         err == httplib::Error::Write;
        last_error = std::string(timed_out ? "timeout: " : "connection failed: ") +
                     httplib::to_string(err);
        retryable = true;
        break;  // out of the hop loop into retry handling
      }

      int status = result->status;
      if (status >= 300 && status < 400) {
        std::string location = result->get_header_value("Location");
        auto resolved = location.empty() ? std::nullopt : resolve_url(current, location);
        if (!resolved) {
          throw FetchError(FetchError::Kind::http_status, current, attempts,
                           "redirect (" + std::to_string(status) + ") without usable Location");
        }
        if (hop == max_hops) {
          throw FetchError(FetchError::Kind::http_status, current, attempts,
                           "too many redirects");
        }
        current = *resolved;
        continue;
      }
      if (status < 200 || status >= 300) {
        last_error = "HTTP status " + std::to_string(status);
        retryable = true;
        break;
      }

      FetchResponse response;
      response.final_url = current;
      response.status = status;
      response.content_type = media_type_of(result->get_header_value("Content-Type"));
      response.body = std::move(body);
      response.fetched_at = static_cast<Timestamp>(std::time(nullptr));
      return response;
    }

    if (retryable && attempt < policy_.max_retries) {
      std::this_thread::sleep_for(backoff_for(policy_, attempt));
    }
  }

  bool timeout = last_error.rfind("timeout", 0) == 0;
  throw FetchError(timeout ? FetchError::Kind::timeout : FetchError::Kind::http_status, url,
                   attempts, last_error.empty() ? "fetch failed" : last_error);
}

FixtureTransport::FixtureTransport(const std::filesystem::path& fixture_dir) {
  if (!std::filesystem::is_directory(fixture_dir)) {
    throw ConfigError("offline fixture directory '" + fixture_dir.string() +
                      "' does not exist");
  }
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir)) {
    if (!entry.is_directory()) continue;
    auto manifest_path = entry.path() / "manifest.json";
    if (!std::filesystem::exists(manifest_path)) continue;

    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed fixture manifest " + manifest_path.string() + ": " + e.what());
    }

    auto add = [&](const nlohmann::json& node, bool article) {
      Entry fixture;
      std::string url = node.at("url").get<std::string>();
      fixture.file = entry.path() / node.at("file").get<std::string>();
      fixture.content_type =
          node.value("content_type", article ? "text/html" : "application/rss+xml");
      if (node.contains("fetched_at")) {
        auto ts = parse_iso8601(node.at("fetched_at").get<std::string>());
        if (!ts) {
          throw ConfigError("bad fetched_at for " + url + " in " + manifest_path.string());
        }
        fixture.fetched_at = *ts;
      } else if (article) {
        throw ConfigError("fixture article " + url + " lacks fetched_at in " +
                          manifest_path.string());
      }
      entries_[url] = std::move(fixture);
    };

    try {
      if (manifest.contains("feed")) add(manifest.at("feed"), false);
      for (const auto& node : manifest.value("articles", nlohmann::json::array())) {
        add(node, true);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed fixture manifest " + manifest_path.string() + ": " + e.what());
    }
  }
}

FetchResponse FixtureTransport::get(const std::string& url) {
  auto it = entries_.find(url);
  if (it == entries_.end()) {
    throw FetchError(FetchError::Kind::not_in_fixtures, url, 1, "URL not in fixture corpus");
  }
  FetchResponse response;
  response.final_url = url;
  response.status = 200;
  response.content_type = it->second.content_type;
  response.body = read_file(it->second.file);
  response.fetched_at = it->second.fetched_at;
  return response;
}

FetchResponse fetch_feed(const FeedSource& source, Transport& transport) {
  return transport.get(source.feed_url);
}

ArticleDocument fetch_article(const FeedItem& item, Transport& transport) {
  FetchResponse response = transport.get(item.link);
  if (!is_html_media_type(response.content_type)) {
    throw FetchError(FetchError::Kind::content_type, item.link, 1,
                     "not an HTML page (content type '" + response.content_type + "')");
  }
  ArticleDocument doc;
  doc.url = response.final_url;
  doc.source_id = item.source_id;
  doc.fetched_at = response.fetched_at;
  doc.published_at = item.published_at;
  doc.raw_html = std::move(response.body);
  doc.extracted_text = extract_text(doc.raw_html);
  doc.content_hash = hex_digest(doc.extracted_text);
  doc.title = item.title;
  return doc;
}

ArticleDocument document_from_summary(const FeedItem& item, Timestamp fetched_at) {
  ArticleDocument doc;
  doc.url = item.link;
  doc.source_id = item.source_id;
  doc.fetched_at = fetched_at;
  doc.published_at = item.published_at;
  // Title and summary are separate blocks; summaries may carry markup.
  std::string title_text = extract_text(item.title);
  std::string summary_text = extract_text(item.summary);
  doc.extracted_text = title_text;
  if (!title_text.empty() && !summary_text.empty()) doc.extracted_text += "\n";
  doc.extracted_text += summary_text;
  doc.content_hash = hex_digest(doc.extracted_text);
  doc.title = item.title;
  return doc;
}

}  // namespace mediapulse
