#pragma once

#include <cstdint>
#include <string>

namespace mwploc::localize {

struct LocalizationConfig {
  std::uint64_t seed = 42;
  /// Localized output must be strictly more similar than this to x_trans.
  double similarity_threshold = 0.8;
  /// Accepted range of len(x_hat) / (len(x_trans) + expected entity delta).
  double length_lower = 0.70;
  double length_upper = 1.43;
  /// Extra attempts after a transport failure. Quality failures are final.
  int max_llm_retries = 2;
  std::string prompt_version = "oneshot_v1";
  std::string extract_prompt_version = "extract_v1";
  int max_output = 1024;
};

/// Throws ValidationError.
void validate(const LocalizationConfig& cfg);

}  // namespace mwploc::localize
