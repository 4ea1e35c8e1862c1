#include "mwploc/extract.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "mwploc/error.hpp"
#include "mwploc/llmclient.hpp"
#include "mwploc/log.hpp"
#include "mwploc/prompts.hpp"
#include "mwploc/text.hpp"

namespace mwploc::extract {

namespace {

using nlohmann::json;

std::optional<json> try_object(std::string_view candidate) {
  json doc = json::parse(candidate, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  return doc;
}

/// Index one past the '}' closing the object opened at `open`, or npos.
std::size_t balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

std::optional<json> find_object(std::string_view raw) {
  if (auto doc = try_object(raw)) return doc;

  // Fenced blocks: ``` or ```json ... ```
  for (std::size_t pos = raw.find("```"); pos != std::string_view::npos;) {
    const std::size_t body = raw.find('\n', pos + 3);
    if (body == std::string_view::npos) break;
    const std::size_t close = raw.find("```", body + 1);
    if (close == std::string_view::npos) break;
    if (auto doc = try_object(raw.substr(body + 1, close - body - 1))) return doc;
    pos = raw.find("```", close + 3);
  }

  for (std::size_t open = raw.find('{'); open != std::string_view::npos; open = raw.find('{', open + 1)) {
    const std::size_t end = balanced_end(raw, open);
    if (end == std::string_view::npos) continue;
    if (auto doc = try_object(raw.substr(open, end - open))) return doc;
  }
  return std::nullopt;
}

std::vector<std::string> list(const json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw ExtractionError(std::string("entity response: '") + key + "' is not a list");
  for (const auto& v : *it)
    if (v.is_string()) out.push_back(v.get<std::string>());
  return out;
}

std::vector<std::string> clean(const std::vector<std::string>& items, std::string_view x_en,
                               std::vector<std::string>* dropped) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::string t = text::trim(item);
    if (t.empty()) continue;
    if (std::find(out.begin(), out.end(), t) != out.end()) continue;
    if (!text::icontains(x_en, t)) {
      if (dropped) dropped->push_back(t);
      continue;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

EntitySet parse_entity_response(std::string_view raw) {
  auto doc = find_object(raw);
  if (!doc) throw ExtractionError("entity response contains no JSON object");
  EntitySet set;
  set.personal_names = list(*doc, "personal_names");
  set.organization_names = list(*doc, "organization_names");
  set.currencies = list(*doc, "currencies");
  return set;
}

EntitySet validate_entities(const EntitySet& ents, std::string_view x_en,
                            std::vector<std::string>* dropped) {
  EntitySet out;
  out.personal_names = clean(ents.personal_names, x_en, dropped);
  out.organization_names = clean(ents.organization_names, x_en, dropped);
  out.currencies = clean(ents.currencies, x_en, dropped);
  return out;
}

std::string build_extraction_prompt(std::string_view x_en, std::string_view prompt_version) {
  return prompts::render(prompts::asset(prompt_version), {{"problem", std::string(x_en)}});
}

EntitySet classify_entities(std::string_view x_en, llm::LlmClient& llm, const ExtractionConfig& cfg) {
  if (x_en.empty()) throw std::invalid_argument("classify_entities: empty text");

  llm::LlmRequest req;
  req.prompt = build_extraction_prompt(x_en, cfg.prompt_version);
  req.max_output = cfg.max_output;
  req.tag = "extract:" + cfg.record_id;

  auto ask = [&](const llm::LlmRequest& r) {
    try {
      return llm::complete_with_retries(llm, r, cfg.max_llm_retries);
    } catch (const Error& e) {
      throw ExtractionError(std::string("entity extraction request failed: ") + e.what());
    }
  };

  const std::string reply = ask(req);
  EntitySet parsed;
  try {
    parsed = parse_entity_response(reply);
  } catch (const ExtractionError& first) {
    log::info("record " + cfg.record_id + ": " + first.what() + "; asking again");
    llm::LlmRequest repair = req;
    repair.prompt = prompts::render(prompts::asset("extract_repair_v1"), {{"previous_prompt", req.prompt}});
    repair.tag = req.tag + ":repair";
    parsed = parse_entity_response(ask(repair));
  }

  std::vector<std::string> dropped;
  EntitySet valid = validate_entities(parsed, x_en, &dropped);
  for (const auto& d : dropped)
    log::warning("record " + cfg.record_id + ": dropping entity '" + d + "' not found in the text");
  return valid;
}

}  // namespace mwploc::extract
