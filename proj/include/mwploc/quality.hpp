#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwploc/localize_config.hpp"
#include "mwploc/replace.hpp"

namespace mwploc::quality {

struct QualityReport {
  double length_ratio = 0.0;
  bool length_ok = false;
  bool key_entities_absent = false;
  std::vector<std::string> offending;  // sources still present
  bool replacements_present = false;
  std::vector<std::string> missing;    // targets absent
  double similarity = 0.0;
  bool similarity_ok = false;
  bool passed = false;

  bool operator==(const QualityReport&) const = default;
};

/// Throws ValidationError when the booleans and lists disagree.
void validate(const QualityReport& report);

/// Total size of the matching blocks found by repeatedly taking the longest
/// common contiguous block (earliest in `a`, then earliest in `b`) and
/// recursing on both sides of it.
std::size_t matching_characters(std::u32string_view a, std::u32string_view b);

/// Gestalt ratio 2M / (|a| + |b|) over code points; 1.0 when both are empty.
double similarity_ratio(std::u32string_view a, std::u32string_view b);
double similarity_ratio(std::string_view a, std::string_view b);

/// Runs all four gates without short-circuiting.
QualityReport run_quality_checks(std::string_view x_hat, std::string_view x_trans,
                                 const replace::ReplacementDict& dict,
                                 const localize::LocalizationConfig& cfg);

/// Reason string for the first failing gate in the order key entities,
/// replacements, length, similarity. Empty when the report passed.
std::optional<std::string> failure_reason(const QualityReport& report);

}  // namespace mwploc::quality
