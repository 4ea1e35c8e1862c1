#include "mwploc/answer.hpp"

#include <charconv>
#include <string>

namespace mwploc::evalkit {

namespace {

bool digit(char c) { return c >= '0' && c <= '9'; }
bool alnum(char c) { return digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::size_t digit_run(std::string_view s, std::size_t pos) {
  std::size_t end = pos;
  while (end < s.size() && digit(s[end])) ++end;
  return end - pos;
}

}  // namespace

std::optional<double> extract_answer(std::string_view s) {
  std::optional<double> last;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t start = pos;
    bool negative = false;
    if (s[pos] == '-') {
      ++start;
      negative = pos == 0 || !alnum(s[pos - 1]);
    }
    const bool starts_number =
        start < s.size() &&
        (digit(s[start]) || (s[start] == '.' && start + 1 < s.size() && digit(s[start + 1])));
    if (!starts_number) {
      ++pos;
      continue;
    }

    std::string token;
    if (negative) token.push_back('-');
    std::size_t cur = start;
    const std::size_t lead = digit_run(s, cur);
    token.append(s.substr(cur, lead));
    cur += lead;
    if (lead >= 1 && lead <= 3) {
      // Thousands groups: ",ddd" not followed by a further digit.
      while (cur + 4 <= s.size() && s[cur] == ',' && digit_run(s, cur + 1) == 3) {
        token.append(s.substr(cur + 1, 3));
        cur += 4;
      }
    }
    if (cur + 1 < s.size() && s[cur] == '.' && digit(s[cur + 1])) {
      const std::size_t frac = digit_run(s, cur + 1);
      token.append(s.substr(cur, frac + 1));
      cur += frac + 1;
    }
    if (token.front() == '.' || (negative && token[1] == '.')) token.insert(negative ? 1 : 0, "0");

    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc() && ptr == token.data() + token.size()) last = value;
    pos = cur;
  }
  return last;
}

}  // namespace mwploc::evalkit
