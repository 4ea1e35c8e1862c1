#include "mwploc/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mwploc/error.hpp"
#include "mwploc/prompts.hpp"
#include "mwploc/text.hpp"

namespace mwploc::evalkit {

bool numeric_match(std::string_view pred, double gold, double rel_tol) {
  if (!std::isfinite(gold)) return false;
  const auto p = extract_answer(pred);
  if (!p) return false;
  return std::fabs(*p - gold) <= rel_tol * std::max(1.0, std::fabs(gold));
}

bool exact_match(std::string_view pred, std::string_view gold_raw) { return text::trim(pred) == text::trim(gold_raw); }

EvalReport evaluate(const Predictions& preds_by_prompt, std::span<const corpus::MwpRecord> golds, double rel_tol) {
  if (preds_by_prompt.empty()) throw ValidationError("evaluate: at least one prompt variant is required");
  std::set<std::string> gold_ids;
  for (const auto& g : golds) {
    if (!g.answer_num) throw ValidationError("gold record '" + g.id + "' has no numeric answer");
    gold_ids.insert(g.id);
  }

  EvalReport report;
  report.n_records = golds.size();
  for (const auto& [prompt_id, preds] : preds_by_prompt) {
    for (const auto& [id, _] : preds)
      if (!gold_ids.count(id))
        throw ValidationError("prompt '" + prompt_id + "' has a prediction for unknown record '" + id + "'");
    PromptScores scores;
    scores.prompt_id = prompt_id;
    std::size_t em = 0;
    std::size_t nm = 0;
    for (const auto& g : golds) {
      auto it = preds.find(g.id);
      if (it == preds.end())
        throw ValidationError("prompt '" + prompt_id + "' has no prediction for record '" + g.id + "'");
      RecordScore s{g.id, exact_match(it->second, g.answer_raw), numeric_match(it->second, *g.answer_num, rel_tol)};
      em += s.em;
      nm += s.nm;
      scores.records.push_back(std::move(s));
    }
    const double n = golds.empty() ? 1.0 : static_cast<double>(golds.size());
    scores.em = golds.empty() ? 0.0 : static_cast<double>(em) / n;
    scores.nm = golds.empty() ? 0.0 : static_cast<double>(nm) / n;
    report.per_prompt.push_back(std::move(scores));
  }
  double em_sum = 0.0;
  double nm_sum = 0.0;
  for (const auto& p : report.per_prompt) {
    em_sum += p.em;
    nm_sum += p.nm;
  }
  const auto variants = static_cast<double>(report.per_prompt.size());
  report.aggregate_em = em_sum / variants;
  report.aggregate_nm = nm_sum / variants;
  return report;
}

std::map<std::string, EvalReport> evaluate_by_language(const Predictions& preds_by_prompt,
                                                       std::span<const corpus::MwpRecord> golds, double rel_tol) {
  std::map<std::string, EvalReport> out;
  out.emplace("all", evaluate(preds_by_prompt, golds, rel_tol));
  std::map<std::string, std::vector<corpus::MwpRecord>> by_lang;
  for (const auto& g : golds) by_lang[g.lang].push_back(g);
  for (const auto& [lang, recs] : by_lang) {
    Predictions subset;
    for (const auto& [prompt_id, preds] : preds_by_prompt) {
      auto& dst = subset[prompt_id];
      for (const auto& r : recs)
        if (auto it = preds.find(r.id); it != preds.end()) dst.emplace(r.id, it->second);
    }
    out.emplace(lang, evaluate(subset, recs, rel_tol));
  }
  return out;
}

double delta_nm(const EvalReport& localized, const EvalReport& translated, std::string_view lang) {
  if (localized.n_records != translated.n_records)
    throw ValidationError("delta_nm for '" + std::string(lang) + "': record counts differ (" +
                          std::to_string(localized.n_records) + " vs " + std::to_string(translated.n_records) + ")");
  return localized.aggregate_nm - translated.aggregate_nm;
}

DeltaSign classify_delta(double delta, double eps) {
  if (std::fabs(delta) < eps) return DeltaSign::neutral;
  return delta > 0 ? DeltaSign::positive : DeltaSign::negative;
}

std::string_view to_string(DeltaSign sign) {
  switch (sign) {
    case DeltaSign::positive: return "+";
    case DeltaSign::neutral: return "0";
    case DeltaSign::negative: return "-";
  }
  return "0";
}

std::vector<DeltaRow> delta_table(const std::map<std::string, EvalReport>& localized,
                                  const std::map<std::string, EvalReport>& translated) {
  std::vector<DeltaRow> rows;
  for (const auto& [lang, loc] : localized) {
    auto it = translated.find(lang);
    if (it == translated.end()) continue;
    DeltaRow row;
    row.lang = lang;
    row.nm_localized = loc.aggregate_nm;
    row.nm_translated = it->second.aggregate_nm;
    row.delta = delta_nm(loc, it->second, lang);
    row.sign = classify_delta(row.delta);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_delta_table(std::span<const DeltaRow> rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %14s %14s %10s %6s\n", "lang", "NM_translated", "NM_localized",
                "delta_NM", "sign");
  out += line;
  std::size_t positive = 0;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-8s %14.4f %14.4f %+10.4f %6s\n", r.lang.c_str(), r.nm_translated,
                  r.nm_localized, r.delta, std::string(to_string(r.sign)).c_str());
    out += line;
    positive += r.sign == DeltaSign::positive && r.lang != "all";
  }
  std::snprintf(line, sizeof line, "languages with delta_NM > 0: %zu\n", positive);
  out += line;
  return out;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json o = nlohmann::ordered_json::object();
  o["n_records"] = report.n_records;
  o["aggregate_em"] = report.aggregate_em;
  o["aggregate_nm"] = report.aggregate_nm;
  auto prompts = nlohmann::ordered_json::array();
  for (const auto& p : report.per_prompt) {
    nlohmann::ordered_json po = nlohmann::ordered_json::object();
    po["prompt_id"] = p.prompt_id;
    po["em"] = p.em;
    po["nm"] = p.nm;
    auto recs = nlohmann::ordered_json::array();
    for (const auto& r : p.records) recs.push_back({{"id", r.id}, {"em", r.em}, {"nm", r.nm}});
    po["records"] = std::move(recs);
    prompts.push_back(std::move(po));
  }
  o["per_prompt"] = std::move(prompts);
  return o;
}

EvalReport eval_report_from_json(const nlohmann::ordered_json& o) {
  try {
    EvalReport r;
    r.n_records = o.at("n_records").get<std::size_t>();
    r.aggregate_em = o.at("aggregate_em").get<double>();
    r.aggregate_nm = o.at("aggregate_nm").get<double>();
    for (const auto& po : o.at("per_prompt")) {
      PromptScores p;
      p.prompt_id = po.at("prompt_id").get<std::string>();
      p.em = po.at("em").get<double>();
      p.nm = po.at("nm").get<double>();
      for (const auto& ro : po.at("records"))
        p.records.push_back({ro.at("id").get<std::string>(), ro.at("em").get<bool>(), ro.at("nm").get<bool>()});
      r.per_prompt.push_back(std::move(p));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed evaluation report: ") + e.what());
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(text::trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<ScoredTranslation> read_scores(std::istream& in, const std::string& source) {
  std::vector<ScoredTranslation> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (lineno == 1 && !fields.empty() && fields[0] == "record_id") continue;
    if (fields.size() != 3) throw ParseError(source, lineno, "expected 'record_id, lang, score'");
    if (fields[0].empty() || fields[1].empty()) throw ParseError(source, lineno, "empty record_id or lang");
    double score = 0.0;
    const auto& s = fields[2];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(source, lineno, "score is not a number");
    if (!(score >= 0.0 && score <= 1.0)) throw ParseError(source, lineno, "score outside [0,1]");
    if (!seen.emplace(fields[0], fields[1]).second)
      throw ParseError(source, lineno, "duplicate score for '" + fields[0] + "' in '" + fields[1] + "'");
    out.push_back({fields[0], fields[1], score});
  }
  return out;
}

std::vector<ScoredTranslation> load_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_scores(in, path.string());
}

std::map<std::string, std::vector<ScoredTranslation>> filter_translations(std::span<const ScoredTranslation> scores,
                                                                          double threshold, std::size_t top_k) {
  if (top_k == 0) throw std::invalid_argument("filter_translations: top_k must be at least 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("filter_translations: threshold outside [0,1]");
  std::map<std::string, std::vector<ScoredTranslation>> out;
  for (const auto& s : scores)
    if (s.quality_score > threshold) out[s.lang].push_back(s);
  for (auto& [lang, items] : out) {
    std::sort(items.begin(), items.end(), [](const ScoredTranslation& a, const ScoredTranslation& b) {
      if (a.quality_score != b.quality_score) return a.quality_score > b.quality_score;
      return a.record_id < b.record_id;
    });
    if (items.size() > top_k) items.resize(top_k);
  }
  return out;
}

std::vector<std::string> eval_prompt_ids() { return {"eval_a_v1", "eval_b_v1", "eval_c_v1"}; }

std::string render_eval_prompt(std::string_view prompt_id, std::string_view question) {
  const auto ids = eval_prompt_ids();
  if (std::find(ids.begin(), ids.end(), prompt_id) == ids.end())
    throw Error("unknown evaluation prompt '" + std::string(prompt_id) + "'");
  return prompts::render(prompts::asset(prompt_id), {{"question", std::string(question)}});
}

}  // namespace mwploc::evalkit
