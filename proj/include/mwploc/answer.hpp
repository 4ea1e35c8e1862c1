#pragma once

#include <optional>
#include <string_view>

namespace mwploc::evalkit {

/// Last numeric token of `output`, as a number.
///
/// Thousands separators inside a well-formed digit group ("1,234") are
/// dropped, a '-' directly before a number is a sign unless it follows a
/// letter or digit, and anything around the number (currency symbols and
/// words, units, '%') is ignored.
std::optional<double> extract_answer(std::string_view output);

}  // namespace mwploc::evalkit
