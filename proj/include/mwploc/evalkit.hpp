#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mwploc/answer.hpp"
#include "mwploc/corpus.hpp"

namespace mwploc::evalkit {

/// |p - gold| <= rel_tol * max(1, |gold|) where p = extract_answer(pred).
bool numeric_match(std::string_view pred, double gold, double rel_tol = 1e-6);

/// Whitespace-trimmed string equality.
bool exact_match(std::string_view pred, std::string_view gold_raw);

struct RecordScore {
  std::string id;
  bool em = false;
  bool nm = false;

  bool operator==(const RecordScore&) const = default;
};

struct PromptScores {
  std::string prompt_id;
  std::vector<RecordScore> records;  // in gold order
  double em = 0.0;
  double nm = 0.0;

  bool operator==(const PromptScores&) const = default;
};

struct EvalReport {
  std::vector<PromptScores> per_prompt;  // sorted by prompt id
  double aggregate_em = 0.0;             // mean over prompt variants
  double aggregate_nm = 0.0;
  std::size_t n_records = 0;

  bool operator==(const EvalReport&) const = default;
};

/// prompt id -> (record id -> model output)
using Predictions = std::map<std::string, std::map<std::string, std::string>>;

/// Every variant must cover exactly the gold ids. Gold records need a
/// numeric answer. Throws ValidationError otherwise.
EvalReport evaluate(const Predictions& preds_by_prompt, std::span<const corpus::MwpRecord> golds,
                    double rel_tol = 1e-6);

/// One report per language plus "all".
std::map<std::string, EvalReport> evaluate_by_language(const Predictions& preds_by_prompt,
                                                       std::span<const corpus::MwpRecord> golds,
                                                       double rel_tol = 1e-6);

/// NM(localized) - NM(translated). Throws ValidationError when the record
/// counts differ.
double delta_nm(const EvalReport& localized, const EvalReport& translated, std::string_view lang);

enum class DeltaSign { positive, neutral, negative };

/// |delta| below `eps` is neutral.
DeltaSign classify_delta(double delta, double eps = 1e-9);
std::string_view to_string(DeltaSign sign);

struct DeltaRow {
  std::string lang;
  double nm_translated = 0.0;
  double nm_localized = 0.0;
  double delta = 0.0;
  DeltaSign sign = DeltaSign::neutral;
};

/// Rows for languages present in both report sets, sorted by language code.
std::vector<DeltaRow> delta_table(const std::map<std::string, EvalReport>& localized,
                                  const std::map<std::string, EvalReport>& translated);

/// Fixed-width text rendering of a delta table.
std::string render_delta_table(std::span<const DeltaRow> rows);

nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::ordered_json& obj);

struct ScoredTranslation {
  std::string record_id;
  std::string lang;
  double quality_score = 0.0;

  bool operator==(const ScoredTranslation&) const = default;
};

/// Lines of `record_id, lang, score`. A first line whose first field is
/// "record_id" is a header. Throws ParseError for malformed lines, scores
/// outside [0,1] and repeated (record_id, lang) pairs.
std::vector<ScoredTranslation> read_scores(std::istream& in, const std::string& source = {});
std::vector<ScoredTranslation> load_scores(const std::filesystem::path& path);

/// Per language: scores strictly above `threshold`, best first (ties by
/// record id), at most `top_k`. Throws std::invalid_argument when top_k is 0
/// or threshold is outside [0,1].
std::map<std::string, std::vector<ScoredTranslation>> filter_translations(
    std::span<const ScoredTranslation> scores, double threshold, std::size_t top_k);

/// The three evaluation prompt variants shipped with the tool.
std::vector<std::string> eval_prompt_ids();
std::string render_eval_prompt(std::string_view prompt_id, std::string_view question);

}  // namespace mwploc::evalkit
