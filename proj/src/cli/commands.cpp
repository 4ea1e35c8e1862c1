#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "cli/manifest.hpp"
#include "mwploc/corpus.hpp"
#include "mwploc/entitydb.hpp"
#include "mwploc/evalkit.hpp"
#include "mwploc/extract.hpp"
#include "mwploc/llmclient.hpp"
#include "mwploc/localize.hpp"
#include "mwploc/text.hpp"

namespace mwploc::cli {

using Json = nlohmann::ordered_json;

namespace {

void require_file(const std::filesystem::path& p, std::string_view flag) {
  if (p.empty()) throw UsageError(std::string(flag) + " is required");
  if (!std::filesystem::is_regular_file(p)) throw UsageError(std::string(flag) + ": no such file: " + p.string());
}

void prepare_out(const std::filesystem::path& out) {
  if (out.empty()) throw UsageError("--out is required");
  std::filesystem::create_directories(out);
}

void require_jobs(std::size_t jobs) {
  if (jobs == 0) throw UsageError("--jobs must be at least 1");
}

struct Provider {
  std::unique_ptr<llm::LlmClient> client;
  Json snapshot = Json::object();
};

Provider open_provider(const ProviderOptions& opts, RunManifest& manifest) {
  Provider p;
  p.snapshot["provider"] = opts.provider;
  if (opts.provider == "mock") {
    require_file(opts.mock_fixtures, "--mock-fixtures");
    p.snapshot["fixtures"] = opts.mock_fixtures.filename().string();
    manifest.add_input("mock_fixtures", opts.mock_fixtures);
    p.client = llm::MockLlmClient::load(opts.mock_fixtures);
    return p;
  }
  if (opts.provider != "openai" && opts.provider != "gemini")
    throw UsageError("--provider must be one of mock, openai, gemini");
  auto cfg = llm::default_provider(opts.provider);
  if (!opts.model.empty()) cfg.model_name = opts.model;
  if (!opts.endpoint.empty()) cfg.endpoint = opts.endpoint;
  if (!opts.auth_env.empty()) cfg.auth_env = opts.auth_env;
  if (opts.rpm) cfg.rate_limit_rpm = *opts.rpm;
  llm::validate(cfg);
  p.snapshot["model"] = cfg.model_name;
  p.snapshot["endpoint"] = cfg.endpoint;
  p.snapshot["auth_env"] = cfg.auth_env;
  p.snapshot["rate_limit_rpm"] = cfg.rate_limit_rpm;
  p.snapshot["timeout_seconds"] = cfg.timeout_seconds;
  p.snapshot["max_attempts"] = cfg.retry.max_attempts;
  p.snapshot["backoff_base_seconds"] = cfg.retry.backoff_base_seconds;
  p.client = llm::make_live_client(cfg);
  return p;
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

std::string jsonl(const std::vector<Json>& rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

}  // namespace

int cmd_extract(const ExtractOptions& opts, std::ostream& out, std::ostream&) {
  require_file(opts.in, "--in");
  require_jobs(opts.jobs);
  if (opts.max_llm_retries < 0) throw UsageError("--max-retries must not be negative");
  prepare_out(opts.out);

  RunManifest manifest;
  manifest.command = "extract";
  manifest.seed = opts.seed;
  manifest.tool_version = tool_version();
  manifest.add_input("records", opts.in);
  const auto records = corpus::load_records(opts.in);
  auto provider = open_provider(opts.provider, manifest);

  extract::ExtractionConfig base;
  base.max_llm_retries = opts.max_llm_retries;
  manifest.config["prompt_version"] = base.prompt_version;
  manifest.config["max_output"] = base.max_output;
  manifest.config["max_llm_retries"] = base.max_llm_retries;
  manifest.config["jobs"] = opts.jobs;
  manifest.config["provider"] = provider.snapshot;

  std::vector<Json> rows(records.size());
  parallel_for(records.size(), opts.jobs, [&](std::size_t i) {
    const auto& rec = records[i];
    Json row = Json::object();
    row["id"] = rec.id;
    row["lang"] = rec.lang;
    auto cfg = base;
    cfg.record_id = rec.id;
    try {
      const auto ents = extract::validate_entities(extract::classify_entities(rec.x_en, *provider.client, cfg), rec.x_en);
      row["status"] = ents.empty() ? "no_entities" : "ok";
      row["personal_names"] = strings(ents.personal_names);
      row["organization_names"] = strings(ents.organization_names);
      row["currencies"] = strings(ents.currencies);
    } catch (const std::exception& e) {
      row["status"] = "failed";
      row["error"] = e.what();
    }
    rows[i] = std::move(row);
  });

  for (const char* s : {"ok", "no_entities", "failed"}) manifest.counts[s] = 0;
  for (const auto& r : rows) ++manifest.counts[r["status"].get<std::string>()];
  corpus::write_file_atomic(opts.out / "entities.jsonl", jsonl(rows));
  write_manifest(opts.out, manifest);

  out << "extract: " << records.size() << " records, " << manifest.counts["ok"] << " with entities, "
      << manifest.counts["no_entities"] << " without, " << manifest.counts["failed"] << " failed\n";
  return manifest.counts["failed"] > 0 ? exit_partial : exit_ok;
}

int cmd_localize(const LocalizeOptions& opts, std::ostream& out, std::ostream&) {
  require_file(opts.in, "--in");
  require_file(opts.db, "--db");
  require_jobs(opts.jobs);
  localize::validate(opts.cfg);
  prepare_out(opts.out);

  RunManifest manifest;
  manifest.command = "localize";
  manifest.seed = opts.cfg.seed;
  manifest.tool_version = tool_version();
  manifest.add_input("records", opts.in);
  manifest.add_input("entity_db", opts.db);
  const auto db = entitydb::load_db(opts.db);
  const auto records = corpus::load_records(opts.in);
  for (const auto& r : records)
    if (!r.x_trans) throw ValidationError("record '" + r.id + "' has no x_trans to localize");
  auto provider = open_provider(opts.provider, manifest);

  const auto& c = opts.cfg;
  manifest.config["similarity_threshold"] = c.similarity_threshold;
  manifest.config["length_band"] = Json::array({c.length_lower, c.length_upper});
  manifest.config["max_llm_retries"] = c.max_llm_retries;
  manifest.config["prompt_version"] = c.prompt_version;
  manifest.config["extract_prompt_version"] = c.extract_prompt_version;
  manifest.config["max_output"] = c.max_output;
  manifest.config["jobs"] = opts.jobs;
  manifest.config["provider"] = provider.snapshot;

  const auto results = localize::localize_all(records, db, *provider.client, c, opts.jobs);
  for (const char* s : {"localized", "fallback", "no_entities"}) manifest.counts[s] = 0;
  for (const auto& r : results) ++manifest.counts[std::string(corpus::to_string(r.status))];
  corpus::save_records(results, opts.out / "localized.jsonl");
  write_manifest(opts.out, manifest);

  out << "localize: " << results.size() << " records, " << manifest.counts["localized"] << " localized, "
      << manifest.counts["fallback"] << " fallback, " << manifest.counts["no_entities"] << " without entities\n";
  return manifest.counts["fallback"] > 0 ? exit_partial : exit_ok;
}

int cmd_filter(const FilterOptions& opts, std::ostream& out, std::ostream&) {
  if (opts.top_k == 0) throw UsageError("--top-k must be at least 1");
  if (!(opts.threshold >= 0.0 && opts.threshold <= 1.0)) throw UsageError("--threshold must be within [0,1]");
  require_file(opts.scores, "--scores");
  require_file(opts.in, "--in");
  prepare_out(opts.out);

  RunManifest manifest;
  manifest.command = "filter";
  manifest.tool_version = tool_version();
  manifest.config["threshold"] = opts.threshold;
  manifest.config["top_k"] = opts.top_k;
  manifest.add_input("scores", opts.scores);
  manifest.add_input("records", opts.in);

  const auto scores = evalkit::load_scores(opts.scores);
  const auto records = corpus::load_records(opts.in);
  std::map<std::pair<std::string, std::string>, const corpus::MwpRecord*> by_key;
  for (const auto& r : records) by_key[{r.id, r.lang}] = &r;

  const auto selection = evalkit::filter_translations(scores, opts.threshold, opts.top_k);
  std::vector<Json> rows;
  std::string tsv = "lang\trank\trecord_id\tscore\n";
  manifest.counts["scored"] = scores.size();
  manifest.counts["selected"] = 0;
  for (const auto& [lang, items] : selection) {
    std::size_t rank = 0;
    for (const auto& s : items) {
      auto it = by_key.find({s.record_id, s.lang});
      if (it == by_key.end())
        throw ValidationError("selected record '" + s.record_id + "' (" + s.lang + ") is not in " + opts.in.string());
      rows.push_back(corpus::to_json(*it->second));
      std::ostringstream line;
      line << lang << '\t' << ++rank << '\t' << s.record_id << '\t' << s.quality_score << '\n';
      tsv += line.str();
    }
    manifest.counts["selected"] += items.size();
    manifest.counts["selected:" + lang] = items.size();
  }
  corpus::write_file_atomic(opts.out / "selected.jsonl", jsonl(rows));
  corpus::write_file_atomic(opts.out / "selection.tsv", tsv);
  write_manifest(opts.out, manifest);

  out << "filter: " << manifest.counts["selected"] << " of " << scores.size() << " scored translations selected\n";
  return exit_ok;
}

std::vector<std::pair<std::string, std::string>> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
    if (!obj.is_object()) throw ParseError(path.string(), lineno, "expected a JSON object");
    if (!obj.contains("id") || !obj["id"].is_string()) throw ParseError(path.string(), lineno, "missing field 'id'");
    if (!obj.contains("prediction")) throw ParseError(path.string(), lineno, "missing field 'prediction'");
    const auto& p = obj["prediction"];
    std::string pred = p.is_string() ? p.get<std::string>() : p.dump();
    auto id = obj["id"].get<std::string>();
    if (!seen.insert(id).second) throw ParseError(path.string(), lineno, "duplicate id '" + id + "'");
    out.emplace_back(std::move(id), std::move(pred));
  }
  return out;
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream&) {
  if (opts.preds.empty()) throw UsageError("at least one --pred NAME=FILE is required");
  require_file(opts.golds, "--golds");
  if (!(opts.rel_tol >= 0.0)) throw UsageError("--rel-tol must not be negative");
  prepare_out(opts.out);

  RunManifest manifest;
  manifest.command = "eval";
  manifest.tool_version = tool_version();
  manifest.config["rel_tol"] = opts.rel_tol;
  manifest.add_input("golds", opts.golds);

  evalkit::Predictions preds;
  for (const auto& [name, path] : opts.preds) {
    require_file(path, "--pred " + name);
    if (preds.count(name)) throw UsageError("prompt '" + name + "' given twice");
    manifest.add_input("pred:" + name, path);
    auto& dst = preds[name];
    for (auto& [id, p] : load_predictions(path)) dst.emplace(std::move(id), std::move(p));
  }
  const auto golds = corpus::load_records(opts.golds);
  const auto reports = evalkit::evaluate_by_language(preds, golds, opts.rel_tol);

  Json doc = Json::object();
  doc["rel_tol"] = opts.rel_tol;
  Json by_lang = Json::object();
  for (const auto& [lang, rep] : reports) by_lang[lang] = evalkit::to_json(rep);
  doc["by_language"] = std::move(by_lang);
  corpus::write_file_atomic(opts.out / "eval.json", doc.dump(2) + "\n");

  manifest.counts["records"] = golds.size();
  manifest.counts["prompts"] = preds.size();
  write_manifest(opts.out, manifest);

  const auto& all = reports.at("all");
  out << "eval: " << golds.size() << " records, " << preds.size() << " prompts, EM " << all.aggregate_em << ", NM "
      << all.aggregate_nm << "\n";
  return exit_ok;
}

namespace {

std::map<std::string, evalkit::EvalReport> load_eval(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  if (!doc.is_object() || !doc.contains("by_language") || !doc["by_language"].is_object())
    throw ValidationError(path.string() + ": missing 'by_language'");
  std::map<std::string, evalkit::EvalReport> out;
  for (const auto& [lang, rep] : doc["by_language"].items()) out.emplace(lang, evalkit::eval_report_from_json(rep));
  return out;
}

}  // namespace

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream&) {
  require_file(opts.localized, "--localized");
  require_file(opts.translated, "--translated");
  prepare_out(opts.out);

  RunManifest manifest;
  manifest.command = "report";
  manifest.tool_version = tool_version();
  manifest.add_input("eval_localized", opts.localized);
  manifest.add_input("eval_translated", opts.translated);

  const auto rows = evalkit::delta_table(load_eval(opts.localized), load_eval(opts.translated));
  Json arr = Json::array();
  std::size_t positive = 0;
  for (const auto& r : rows) {
    Json o = Json::object();
    o["lang"] = r.lang;
    o["nm_translated"] = r.nm_translated;
    o["nm_localized"] = r.nm_localized;
    o["delta_nm"] = r.delta;
    o["sign"] = evalkit::to_string(r.sign);
    arr.push_back(std::move(o));
    switch (r.sign) {
      case evalkit::DeltaSign::positive: ++manifest.counts["positive"]; break;
      case evalkit::DeltaSign::neutral: ++manifest.counts["neutral"]; break;
      case evalkit::DeltaSign::negative: ++manifest.counts["negative"]; break;
    }
    positive += r.sign == evalkit::DeltaSign::positive && r.lang != "all";
  }
  Json doc = Json::object();
  doc["rows"] = std::move(arr);
  doc["languages_improved"] = positive;
  const auto txt = evalkit::render_delta_table(rows);
  corpus::write_file_atomic(opts.out / "report.json", doc.dump(2) + "\n");
  corpus::write_file_atomic(opts.out / "report.txt", txt);
  manifest.counts["rows"] = rows.size();
  write_manifest(opts.out, manifest);
  out << txt;
  return exit_ok;
}

}  // namespace mwploc::cli
