#include "mwploc/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace mwploc::text {

namespace {

constexpr char32_t kReplacementChar = 0xFFFD;

template <typename Fn>
void for_each_code_point(std::string_view utf8, Fn&& fn) {
  const auto* data = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto size = static_cast<int32_t>(utf8.size());
  int32_t offset = 0;
  while (offset < size) {
    const int32_t begin = offset;
    UChar32 c = 0;
    U8_NEXT(data, offset, size, c);
    fn(c < 0 ? kReplacementChar : static_cast<char32_t>(c),
       static_cast<std::size_t>(begin), static_cast<std::size_t>(offset));
  }
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  for_each_code_point(utf8, [&](char32_t cp, std::size_t, std::size_t) { out.push_back(cp); });
  return out;
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
    if (error) {
      len = 0;
      U8_APPEND_UNSAFE(buf, len, kReplacementChar);
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
  }
  return out;
}

std::size_t length(std::string_view utf8) {
  std::size_t n = 0;
  for_each_code_point(utf8, [&](char32_t, std::size_t, std::size_t) { ++n; });
  return n;
}

bool is_letter(char32_t cp) { return u_isUAlphabetic(static_cast<UChar32>(cp)); }

char32_t fold(char32_t cp) {
  return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT));
}

std::u32string fold(std::u32string_view cps) {
  std::u32string out(cps);
  for (auto& cp : out) cp = fold(cp);
  return out;
}

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

std::string trim(std::string_view s) {
  const auto cps = index(s);
  std::size_t first = 0;
  std::size_t last = cps.size();
  while (first < last && is_space(cps[first].value)) ++first;
  while (last > first && is_space(cps[last - 1].value)) --last;
  if (first == last) return {};
  return std::string(s.substr(cps[first].byte_begin, cps[last - 1].byte_end - cps[first].byte_begin));
}

bool iequals(std::string_view a, std::string_view b) {
  return fold(decode(a)) == fold(decode(b));
}

bool icontains(std::string_view haystack, std::string_view needle) {
  return fold(decode(haystack)).find(fold(decode(needle))) != std::u32string::npos;
}

std::vector<CodePoint> index(std::string_view utf8) {
  std::vector<CodePoint> out;
  out.reserve(utf8.size());
  for_each_code_point(utf8, [&](char32_t cp, std::size_t begin, std::size_t end) {
    out.push_back(CodePoint{cp, fold(cp), is_letter(cp), begin, end});
  });
  return out;
}

bool is_boundary(const std::vector<CodePoint>& cps, std::size_t pos) {
  if (pos == 0 || pos >= cps.size()) return true;
  return !cps[pos - 1].letter || !cps[pos].letter;
}

std::vector<std::size_t> find_at_boundaries(const std::vector<CodePoint>& haystack,
                                            std::u32string_view folded_needle) {
  std::vector<std::size_t> hits;
  const std::size_t n = folded_needle.size();
  if (n == 0 || n > haystack.size()) return hits;
  std::size_t pos = 0;
  while (pos + n <= haystack.size()) {
    bool match = is_boundary(haystack, pos);
    for (std::size_t k = 0; match && k < n; ++k) match = haystack[pos + k].folded == folded_needle[k];
    if (match && is_boundary(haystack, pos + n)) {
      hits.push_back(pos);
      pos += n;
    } else {
      ++pos;
    }
  }
  return hits;
}

bool contains_at_boundary(std::string_view haystack, std::string_view needle) {
  return !find_at_boundaries(index(haystack), fold(decode(needle))).empty();
}

}  // namespace mwploc::text
