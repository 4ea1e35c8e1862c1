#include "mwploc/quality.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

#include "mwploc/error.hpp"
#include "mwploc/text.hpp"

namespace mwploc::quality {

namespace {

struct Block {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

/// Longest common block of a[alo,ahi) and b[blo,bhi); ties go to the
/// smallest start in `a`, then in `b`. `prev`/`cur` are scratch rows.
Block longest_block(std::u32string_view a, std::u32string_view b, std::size_t alo, std::size_t ahi,
                    std::size_t blo, std::size_t bhi, std::vector<std::size_t>& prev,
                    std::vector<std::size_t>& cur) {
  Block best{alo, blo, 0};
  const std::size_t width = bhi - blo + 1;
  prev.assign(width, 0);
  cur.assign(width, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t col = j - blo + 1;
      if (a[i] == b[j]) {
        const std::size_t run = prev[col - 1] + 1;
        cur[col] = run;
        if (run > best.size) best = {i + 1 - run, j + 1 - run, run};
      } else {
        cur[col] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& i : items) {
    if (!out.empty()) out += ", ";
    out += i;
  }
  return out;
}

}  // namespace

void validate(const QualityReport& r) {
  if (r.passed != (r.length_ok && r.key_entities_absent && r.replacements_present && r.similarity_ok))
    throw ValidationError("quality report: passed must be the conjunction of the four checks");
  if (r.key_entities_absent != r.offending.empty())
    throw ValidationError("quality report: offending list disagrees with key_entities_absent");
  if (r.replacements_present != r.missing.empty())
    throw ValidationError("quality report: missing list disagrees with replacements_present");
  if (!(r.similarity >= 0.0 && r.similarity <= 1.0))
    throw ValidationError("quality report: similarity outside [0,1]");
  if (!(r.length_ratio >= 0.0)) throw ValidationError("quality report: negative length ratio");
}

std::size_t matching_characters(std::u32string_view a, std::u32string_view b) {
  struct Range {
    std::size_t alo, ahi, blo, bhi;
  };
  std::vector<Range> pending{{0, a.size(), 0, b.size()}};
  std::vector<std::size_t> prev;
  std::vector<std::size_t> cur;
  std::size_t total = 0;
  while (!pending.empty()) {
    const Range r = pending.back();
    pending.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    const Block m = longest_block(a, b, r.alo, r.ahi, r.blo, r.bhi, prev, cur);
    if (m.size == 0) continue;
    total += m.size;
    pending.push_back({r.alo, m.a, r.blo, m.b});
    pending.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
  }
  return total;
}

double similarity_ratio(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(matching_characters(a, b)) / static_cast<double>(total);
}

double similarity_ratio(std::string_view a, std::string_view b) {
  return similarity_ratio(text::decode(a), text::decode(b));
}

QualityReport run_quality_checks(std::string_view x_hat, std::string_view x_trans,
                                 const replace::ReplacementDict& dict,
                                 const localize::LocalizationConfig& cfg) {
  QualityReport r;

  const auto hat_cps = text::index(x_hat);
  const std::size_t hat_len = hat_cps.size();
  const auto expected_delta = replace::apply_replacements_detailed(x_trans, dict).length_delta();
  const auto expected_len =
      static_cast<std::ptrdiff_t>(text::length(x_trans)) + expected_delta;
  r.length_ratio = static_cast<double>(hat_len) /
                   static_cast<double>(std::max<std::ptrdiff_t>(expected_len, 1));
  r.length_ok = r.length_ratio >= cfg.length_lower && r.length_ratio <= cfg.length_upper;

  for (const auto& e : dict.entries)
    if (!text::find_at_boundaries(hat_cps, text::fold(text::decode(e.source))).empty())
      r.offending.push_back(e.source);
  r.key_entities_absent = r.offending.empty();

  for (const auto& t : replace::distinct_targets(dict))
    if (text::find_at_boundaries(hat_cps, text::fold(text::decode(t))).empty()) r.missing.push_back(t);
  r.replacements_present = r.missing.empty();

  r.similarity = similarity_ratio(x_hat, x_trans);
  r.similarity_ok = r.similarity > cfg.similarity_threshold;

  r.passed = r.length_ok && r.key_entities_absent && r.replacements_present && r.similarity_ok;
  return r;
}

std::optional<std::string> failure_reason(const QualityReport& r) {
  if (!r.key_entities_absent) return "key_entity_present: " + join(r.offending);
  if (!r.replacements_present) return "replacement_missing: " + join(r.missing);
  if (!r.length_ok) return "length_out_of_band: " + fixed4(r.length_ratio);
  if (!r.similarity_ok) return "similarity_below_threshold: " + fixed4(r.similarity);
  return std::nullopt;
}

}  // namespace mwploc::quality
