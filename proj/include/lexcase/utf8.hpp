#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace lexcase::utf8 {

/// Byte offset of the first malformed sequence, or nullopt when `text` is
/// well-formed UTF-8 (no overlongs, no surrogates, nothing above U+10FFFF).
std::optional<std::size_t> first_invalid(std::string_view text);

/// Decodes one code point starting at `pos` and advances `pos` past it.
/// Input must already be valid UTF-8.
char32_t decode(std::string_view text, std::size_t& pos);

void append(std::string& out, char32_t cp);

}  // namespace lexcase::utf8
