#pragma once

// UTF-8 helpers shared by the replacer and the quality gates. Every length in
// this project is counted in Unicode code points, not bytes.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mwploc::text {

/// Decodes UTF-8; ill-formed sequences become U+FFFD, one per bad byte run.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);

std::size_t length(std::string_view utf8);

/// Unicode Alphabetic property (letters plus alphabetic marks).
bool is_letter(char32_t cp);
/// Simple (one-to-one) default case folding.
char32_t fold(char32_t cp);
std::u32string fold(std::u32string_view cps);

bool is_digit(char32_t cp);
bool is_space(char32_t cp);

std::string trim(std::string_view s);

/// Case-insensitive equality under simple folding.
bool iequals(std::string_view a, std::string_view b);

/// Case-insensitive substring test, no boundary requirement.
bool icontains(std::string_view haystack, std::string_view needle);

/// A code point of a text with its byte span, used by boundary-aware scanners.
struct CodePoint {
  char32_t value;
  char32_t folded;
  bool letter;
  std::size_t byte_begin;
  std::size_t byte_end;
};

std::vector<CodePoint> index(std::string_view utf8);

/// Position `pos` (0..size) in `cps` is a word boundary when either adjacent
/// code point is missing or is not a letter.
bool is_boundary(const std::vector<CodePoint>& cps, std::size_t pos);

/// Indices (in code points) where `needle` occurs case-insensitively with a
/// boundary at both ends. Occurrences do not overlap.
std::vector<std::size_t> find_at_boundaries(const std::vector<CodePoint>& haystack,
                                            std::u32string_view folded_needle);

bool contains_at_boundary(std::string_view haystack, std::string_view needle);

}  // namespace mwploc::text
