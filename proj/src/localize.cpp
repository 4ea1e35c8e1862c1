#include "mwploc/localize.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "mwploc/error.hpp"
#include "mwploc/extract.hpp"
#include "mwploc/log.hpp"
#include "mwploc/prompts.hpp"
#include "mwploc/quality.hpp"
#include "mwploc/replace.hpp"
#include "mwploc/text.hpp"

namespace mwploc::localize {

void validate(const LocalizationConfig& cfg) {
  if (!(cfg.similarity_threshold > 0.0 && cfg.similarity_threshold <= 1.0))
    throw ValidationError("similarity threshold must lie in (0, 1]");
  if (!(cfg.length_lower < 1.0 && 1.0 < cfg.length_upper && cfg.length_lower >= 0.0))
    throw ValidationError("length band must satisfy 0 <= lower < 1 < upper");
  if (cfg.max_llm_retries < 0) throw ValidationError("max_llm_retries must be non-negative");
  if (cfg.max_output <= 0) throw ValidationError("max_output must be positive");
  if (cfg.prompt_version != "oneshot_v1" && cfg.prompt_version != "oneshot_context_v1")
    throw ValidationError("unknown localization prompt version '" + cfg.prompt_version + "'");
  prompts::asset(cfg.extract_prompt_version);
}

std::string build_oneshot_prompt(std::string_view x_en, std::string_view x_trans, std::string_view x_ent,
                                 std::string_view lang_name, std::string_view prompt_version) {
  if (x_en.empty() || x_trans.empty() || x_ent.empty() || lang_name.empty())
    throw std::invalid_argument("build_oneshot_prompt: all texts and the language name must be non-empty");
  return prompts::render(prompts::asset(prompt_version), {{"native_lang", std::string(lang_name)},
                                                          {"original_eng", std::string(x_en)},
                                                          {"original_native", std::string(x_trans)},
                                                          {"modified_eng", std::string(x_ent)}});
}

namespace {

corpus::LocalizedRecord passthrough(const corpus::MwpRecord& rec, corpus::Status status) {
  corpus::LocalizedRecord out;
  out.base = rec;
  out.x_loc = *rec.x_trans;
  out.status = status;
  return out;
}

corpus::LocalizedRecord fallback(corpus::LocalizedRecord out, std::string reason) {
  out.status = corpus::Status::fallback;
  out.x_loc = *out.base.x_trans;
  out.failure_reason = std::move(reason);
  log::info("record " + out.base.id + " falls back: " + *out.failure_reason);
  return out;
}

}  // namespace

corpus::LocalizedRecord localize_record(const corpus::MwpRecord& rec, const entitydb::EntityDatabase& db,
                                        llm::LlmClient& llm, const LocalizationConfig& cfg) {
  if (!rec.x_trans) throw std::invalid_argument("record '" + rec.id + "' has no x_trans to localize");

  corpus::LocalizedRecord out = passthrough(rec, corpus::Status::fallback);
  try {
    if (!db.has_language(rec.lang)) return fallback(std::move(out), "unknown_language: " + rec.lang);
    const auto& table = db.language(rec.lang);

    extract::EntitySet ents;
    try {
      ents = extract::classify_entities(
          rec.x_en, llm, {rec.id, cfg.extract_prompt_version, 512, cfg.max_llm_retries});
    } catch (const ExtractionError& e) {
      return fallback(std::move(out), std::string("extraction_failed: ") + e.what());
    }
    if (ents.empty()) return passthrough(rec, corpus::Status::no_entities);

    replace::ReplacementDict dict;
    try {
      dict = replace::build_replacement_dict(ents, db, rec.lang, rec.id, cfg.seed);
    } catch (const MultiCurrencyError& e) {
      return fallback(std::move(out), std::string("multi_currency: ") + e.what());
    } catch (const UnsupportedCurrencyError& e) {
      return fallback(std::move(out), std::string("unsupported_currency: ") + e.what());
    } catch (const CandidateExhaustedError& e) {
      return fallback(std::move(out), std::string("insufficient_candidates: ") + e.what());
    }
    out.replacements = dict;
    out.x_ent = replace::apply_replacements(rec.x_en, dict);

    llm::LlmRequest req;
    req.prompt = build_oneshot_prompt(rec.x_en, *rec.x_trans, *out.x_ent, table.display_name, cfg.prompt_version);
    req.max_output = cfg.max_output;
    req.tag = "loc:" + rec.id;
    std::string x_hat;
    try {
      x_hat = text::trim(llm::complete_with_retries(llm, req, cfg.max_llm_retries));
    } catch (const Error& e) {
      return fallback(std::move(out), std::string("llm_error: ") + e.what());
    }

    out.quality = quality::run_quality_checks(x_hat, *rec.x_trans, dict, cfg);
    if (auto reason = quality::failure_reason(*out.quality)) return fallback(std::move(out), *reason);
    out.status = corpus::Status::localized;
    out.x_loc = std::move(x_hat);
    return out;
  } catch (const std::exception& e) {
    return fallback(std::move(out), std::string("internal_error: ") + e.what());
  }
}

std::vector<corpus::LocalizedRecord> localize_all(std::span<const corpus::MwpRecord> records,
                                                  const entitydb::EntityDatabase& db, llm::LlmClient& llm,
                                                  const LocalizationConfig& cfg, std::size_t jobs) {
  validate(cfg);
  for (const auto& rec : records)
    if (!rec.x_trans) throw ValidationError("record '" + rec.id + "' has no x_trans to localize");

  std::vector<corpus::LocalizedRecord> out(records.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, records.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) out[i] = localize_record(records[i], db, llm, cfg);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < records.size(); i = next++) out[i] = localize_record(records[i], db, llm, cfg);
    });
  }
  pool.clear();
  return out;
}

std::string direct_localize(std::string_view x_en, std::string_view lang_name, llm::LlmClient& llm,
                            std::string_view tag) {
  if (x_en.empty()) throw std::invalid_argument("direct_localize: empty text");
  if (lang_name.empty()) throw std::invalid_argument("direct_localize: empty language name");
  llm::LlmRequest req;
  req.prompt = prompts::render(prompts::asset("direct_v1"),
                               {{"target_lang_name", std::string(lang_name)}, {"original_eng", std::string(x_en)}});
  req.tag = std::string(tag);
  return llm.complete(req);
}

}  // namespace mwploc::localize
