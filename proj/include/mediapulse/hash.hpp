#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mediapulse {

// FNV-1a, 64 bit. Used for content digests, lexicon version ids and fixture
// file names; identity at crawl scale, not cryptography.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// 16 lowercase hex digits.
std::string to_hex64(std::uint64_t value);

inline std::string hex_digest(std::string_view data) { return to_hex64(fnv1a64(data)); }

}  // namespace mediapulse
