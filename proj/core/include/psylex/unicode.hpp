#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace psylex {

/// Decodes UTF-8 into codepoints. Throws Error with the byte offset of the
/// first invalid sequence.
std::u32string utf8_decode(std::string_view text);

/// Lenient variant: invalid bytes become U+FFFD instead of throwing.
std::u32string utf8_decode_lenient(std::string_view text);

/// Encodes one codepoint as UTF-8 and appends it to out.
void utf8_append(std::string& out, char32_t cp);

std::string utf8_encode(std::u32string_view text);

/// Number of codepoints in a UTF-8 string (lenient).
std::size_t utf8_length(std::string_view text);

/// True if the codepoint is in Unicode general category P* or S*.
bool is_punct_or_symbol(char32_t cp);

/// Unicode whitespace (ASCII ws, NBSP, ideographic space, ...).
bool is_space(char32_t cp);

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

}  // namespace psylex
