#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwploc/corpus.hpp"
#include "mwploc/entitydb.hpp"
#include "mwploc/llmclient.hpp"
#include "mwploc/localize_config.hpp"

namespace mwploc::localize {

/// Renders the one-shot editing prompt. "oneshot_v1" carries the fixed
/// English/French demonstration; "oneshot_context_v1" uses the record's own
/// (x_en, x_trans) pair as the only example.
std::string build_oneshot_prompt(std::string_view x_en, std::string_view x_trans,
                                 std::string_view x_ent, std::string_view lang_name,
                                 std::string_view prompt_version = "oneshot_v1");

/// Runs extraction, dictionary, replacement, one-shot localization and the
/// quality gates for one record. Never throws for a record that has x_trans:
/// every failure becomes status=fallback with x_loc = x_trans.
///
/// Throws std::invalid_argument when rec.x_trans is absent.
corpus::LocalizedRecord localize_record(const corpus::MwpRecord& rec,
                                        const entitydb::EntityDatabase& db, llm::LlmClient& llm,
                                        const LocalizationConfig& cfg);

/// Runs localize_record over `records` with up to `jobs` workers. Output order
/// matches input order.
std::vector<corpus::LocalizedRecord> localize_all(std::span<const corpus::MwpRecord> records,
                                                  const entitydb::EntityDatabase& db,
                                                  llm::LlmClient& llm,
                                                  const LocalizationConfig& cfg,
                                                  std::size_t jobs = 1);

/// Baseline: asks the model to localize the English text in one step and
/// returns its raw reply, ungated.
std::string direct_localize(std::string_view x_en, std::string_view lang_name,
                            llm::LlmClient& llm, std::string_view tag = "direct");

}  // namespace mwploc::localize
