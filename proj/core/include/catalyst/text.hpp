#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by ingestion, prompts and export.
namespace catalyst::text {

bool is_space(char c) noexcept;

std::string_view trim(std::string_view s) noexcept;
bool is_blank(std::string_view s) noexcept;

// Number of whitespace-delimited tokens.
std::size_t word_count(std::string_view s) noexcept;
std::vector<std::string_view> split_words(std::string_view s);

// Collapses runs of spaces/tabs inside each line, trims each line, drops
// empty lines, and joins the survivors with '\n'.
std::string normalize_whitespace(std::string_view s);

// Collapses every whitespace run (newlines included) into one space.
std::string flatten_whitespace(std::string_view s);

// UTF-8 helpers. Offsets exposed to clients are counted in code points.
void append_utf8(std::string& out, char32_t cp);
std::size_t utf8_length(std::string_view s) noexcept;
// Byte offset of the code point at `cp_index`, or nullopt when out of range.
// `cp_index == utf8_length(s)` maps to s.size().
std::optional<std::size_t> utf8_byte_offset(std::string_view s, std::size_t cp_index) noexcept;
// Decodes the next code point starting at `pos`, advancing it. Invalid bytes
// decode as U+FFFD and advance by one.
char32_t next_code_point(std::string_view s, std::size_t& pos) noexcept;

// Windows-1252 (WinAnsiEncoding) <-> Unicode.
char32_t winansi_to_unicode(unsigned char byte) noexcept;
std::optional<unsigned char> unicode_to_winansi(char32_t cp) noexcept;

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

}  // namespace catalyst::text
