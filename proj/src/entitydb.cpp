#include "mwploc/entitydb.hpp"

#include <fstream>
#include <set>
#include <string>

#include "mwploc/error.hpp"
#include "mwploc/hashing.hpp"
#include "mwploc/text.hpp"

namespace mwploc::entitydb {

namespace {

void require_unique(const std::vector<std::string>& items, const std::string& what,
                    std::set<std::u32string>& seen) {
  for (const auto& item : items) {
    if (text::trim(item).empty()) throw ValidationError(what + ": empty entry");
    if (!seen.insert(text::fold(text::decode(item))).second)
      throw ValidationError(what + ": duplicate entry '" + item + "'");
  }
}

void validate_table(const LanguageTable& t, const Limits& limits) {
  const std::string where = "language '" + t.code + "'";
  if (t.code.empty()) throw ValidationError("language code must be non-empty");
  if (t.display_name.empty()) throw ValidationError(where + ": display_name must be non-empty");
  if (t.personal_names.size() < limits.min_personal_names)
    throw ValidationError(where + ": needs at least " + std::to_string(limits.min_personal_names) +
                          " personal_names");
  if (t.organization_names.size() < limits.min_organization_names)
    throw ValidationError(where + ": needs at least " +
                          std::to_string(limits.min_organization_names) + " organization_names");
  std::set<std::u32string> names;
  require_unique(t.personal_names, where + " personal_names", names);
  std::set<std::u32string> orgs;
  require_unique(t.organization_names, where + " organization_names", orgs);

  const auto& c = t.currency;
  if (c.target_word.empty()) throw ValidationError(where + ": currency target_word must be non-empty");
  if (c.symbol_forms.empty() || c.word_forms.empty())
    throw ValidationError(where + ": currency needs symbol_forms and word_forms");
  std::set<std::u32string> forms;
  require_unique(c.symbol_forms, where + " currency forms", forms);
  require_unique(c.word_forms, where + " currency forms", forms);
}

std::vector<std::string> string_list(const nlohmann::json& obj, std::string_view key,
                                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing '" + std::string(key) + "'");
  if (!it->is_array()) throw ValidationError(where + ": '" + std::string(key) + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw ValidationError(where + ": '" + std::string(key) + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(EntityKind kind) { return kind == EntityKind::person ? "person" : "org"; }

EntityDatabase::EntityDatabase(std::vector<LanguageTable> tables, Limits limits) {
  for (auto& t : tables) {
    validate_table(t, limits);
    const std::string code = t.code;
    if (!tables_.emplace(code, std::move(t)).second)
      throw ValidationError("language '" + code + "' listed twice");
  }
}

EntityDatabase EntityDatabase::from_json(const nlohmann::json& doc, Limits limits) {
  if (!doc.is_object()) throw ValidationError("entity database must be a JSON object");
  auto langs = doc.find("languages");
  if (langs == doc.end() || !langs->is_object() || langs->empty())
    throw ValidationError("entity database needs a non-empty 'languages' object");

  std::vector<LanguageTable> tables;
  for (const auto& [code, section] : langs->items()) {
    const std::string where = "language '" + code + "'";
    if (!section.is_object()) throw ValidationError(where + ": section must be an object");
    LanguageTable t;
    t.code = code;
    t.display_name = section.value("display_name", std::string());
    t.personal_names = string_list(section, "personal_names", where);
    t.organization_names = string_list(section, "organization_names", where);
    auto cur = section.find("currency");
    if (cur == section.end() || !cur->is_object())
      throw ValidationError(where + ": missing currency section");
    t.currency.symbol_forms = string_list(*cur, "symbol_forms", where + " currency");
    t.currency.word_forms = string_list(*cur, "word_forms", where + " currency");
    auto target = cur->find("target_word");
    if (target == cur->end() || !target->is_string())
      throw ValidationError(where + ": currency target_word must be a string");
    t.currency.target_word = target->get<std::string>();
    tables.push_back(std::move(t));
  }
  return EntityDatabase(std::move(tables), limits);
}

bool EntityDatabase::has_language(std::string_view code) const { return tables_.find(code) != tables_.end(); }

const LanguageTable& EntityDatabase::language(std::string_view code) const {
  auto it = tables_.find(code);
  if (it == tables_.end()) throw Error("language '" + std::string(code) + "' is not in the entity database");
  return it->second;
}

std::vector<std::string> EntityDatabase::languages() const {
  std::vector<std::string> out;
  for (const auto& [code, _] : tables_) out.push_back(code);
  return out;
}

EntityDatabase load_db(const std::filesystem::path& path, Limits limits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, std::string("malformed JSON: ") + e.what());
  }
  try {
    return EntityDatabase::from_json(doc, limits);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

RecordPicker::RecordPicker(const EntityDatabase& db, std::string lang, std::string record_id,
                           std::uint64_t seed, const std::vector<std::string>& reserved)
    : table_(db.language(lang)), record_id_(std::move(record_id)), seed_(seed) {
  for (const auto& r : reserved) reserved_.push_back(text::fold(text::decode(r)));
}

std::string RecordPicker::pick(EntityKind kind, std::string_view source) {
  const std::u32string folded_source = text::fold(text::decode(source));
  const auto key = std::make_pair(kind, folded_source);
  if (auto it = assigned_.find(key); it != assigned_.end()) return it->second;

  const auto& candidates = table_.candidates(kind);
  const std::size_t n = candidates.size();
  if (n == 0) throw CandidateExhaustedError("no " + std::string(to_string(kind)) + " candidates");

  const std::uint64_t start =
      hashing::stable_hash_fields(std::to_string(seed_), record_id_, to_string(kind),
                                  text::encode(folded_source)) %
      n;
  auto blocked = [&](const std::u32string& c) {
    if (c == folded_source) return true;
    for (const auto& r : reserved_)
      if (r == c) return true;
    for (const auto& t : taken_)
      if (t == c) return true;
    return false;
  };
  for (std::size_t probe = 0; probe < n; ++probe) {
    const std::string& candidate = candidates[(start + probe) % n];
    std::u32string folded = text::fold(text::decode(candidate));
    if (blocked(folded)) continue;
    taken_.push_back(std::move(folded));
    assigned_.emplace(key, candidate);
    return candidate;
  }
  throw CandidateExhaustedError("not enough " + std::string(to_string(kind)) + " candidates in '" +
                                table_.code + "' for record '" + record_id_ + "'");
}

std::string pick_replacement(const EntityDatabase& db, std::string_view lang, EntityKind kind,
                             std::string_view source, std::string_view record_id,
                             std::uint64_t seed) {
  RecordPicker picker(db, std::string(lang), std::string(record_id), seed);
  return picker.pick(kind, source);
}

}  // namespace mwploc::entitydb
