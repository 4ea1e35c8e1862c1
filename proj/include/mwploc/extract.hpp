#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mwploc::llm {
class LlmClient;
}

namespace mwploc::extract {

struct EntitySet {
  std::vector<std::string> personal_names;
  std::vector<std::string> organization_names;
  std::vector<std::string> currencies;

  bool empty() const {
    return personal_names.empty() && organization_names.empty() && currencies.empty();
  }
  bool operator==(const EntitySet&) const = default;
};

/// Pulls the entity object out of free-form model output. Accepts a bare
/// object, an object inside a code fence, or one embedded in prose; keys other
/// than the three lists are ignored and absent lists are empty.
/// Throws ExtractionError when no object can be parsed.
EntitySet parse_entity_response(std::string_view raw);

/// Trims, drops empty strings and exact duplicates, and drops every entity
/// that does not occur in `x_en` (case-insensitive). Dropped strings are
/// appended to `dropped` when given.
EntitySet validate_entities(const EntitySet& ents, std::string_view x_en,
                            std::vector<std::string>* dropped = nullptr);

struct ExtractionConfig {
  std::string record_id;
  std::string prompt_version = "extract_v1";
  int max_output = 512;
  int max_llm_retries = 0;  // extra attempts after a transport failure
};

std::string build_extraction_prompt(std::string_view x_en, std::string_view prompt_version);

/// Asks the model for the entities of `x_en`. One repair round-trip is made
/// when the first reply does not parse. Throws ExtractionError on a second
/// parse failure or when the client gives up.
EntitySet classify_entities(std::string_view x_en, llm::LlmClient& llm,
                            const ExtractionConfig& cfg);

}  // namespace mwploc::extract
