#pragma once

#include <string>
#include <string_view>

namespace mediapulse {

// Extracts the visible text of an HTML document. Lenient by design: real
// newspaper markup is malformed and extraction must never hard-fail.
//
//  - script/style/template contents and comments are dropped
//  - block-level boundaries become single newlines, inline tags vanish
//  - character references are decoded (named set incl. Spanish letters,
//    plus numeric forms)
//  - bytes that are not valid UTF-8 become U+FFFD
//
// The output contains no markup: never '<' followed by an ASCII letter,
// '/', '!' or '?'.
std::string extract_text(std::string_view html);

// Decodes HTML/XML character references in a text span. Unknown named
// references are kept verbatim. Shared by the feed parser.
std::string decode_entities(std::string_view text);

}  // namespace mediapulse
