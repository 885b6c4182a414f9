#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phishlab::text {

/// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

/// Decodes the code point starting at `pos` and advances `pos`. Input must be
/// valid UTF-8.
char32_t next_code_point(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

std::size_t code_point_count(std::string_view s);

/// Byte offset of the `index`-th code point (or s.size() when index == count).
std::size_t byte_offset_of(std::string_view s, std::size_t index);

/// Unicode White_Space property.
bool is_space(char32_t cp);

/// U+200B, U+200C, U+200D, U+FEFF.
bool is_zero_width(char32_t cp);

/// Term separators: white space plus the zero-width set.
bool is_term_separator(char32_t cp);

std::string strip_zero_width(std::string_view s);

struct Token {
  std::string_view text;
  std::size_t offset = 0;  // byte offset in the source string
};

/// Splits on term separators; empty tokens are dropped.
std::vector<Token> tokenize(std::string_view s);

std::vector<std::string> split_terms(std::string_view s);

std::string to_lower_ascii(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

std::string_view trim(std::string_view s);

bool is_blank(std::string_view s);

}  // namespace phishlab::text
