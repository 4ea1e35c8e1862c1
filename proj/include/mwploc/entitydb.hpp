#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mwploc::entitydb {

enum class EntityKind { person, org };

std::string_view to_string(EntityKind kind);

/// Source-side currency forms replaced for one language, and the native word
/// they all become.
struct CurrencyEntry {
  std::vector<std::string> symbol_forms;
  std::vector<std::string> word_forms;
  std::string target_word;

  bool operator==(const CurrencyEntry&) const = default;
};

struct LanguageTable {
  std::string code;          // ISO-639-3, e.g. "swa"
  std::string display_name;  // used in prompts, e.g. "Swahili"
  std::vector<std::string> personal_names;
  std::vector<std::string> organization_names;
  CurrencyEntry currency;

  const std::vector<std::string>& candidates(EntityKind kind) const {
    return kind == EntityKind::person ? personal_names : organization_names;
  }

  bool operator==(const LanguageTable&) const = default;
};

/// Minimum list sizes enforced on construction.
struct Limits {
  std::size_t min_personal_names = 8;
  std::size_t min_organization_names = 3;
};

/// Immutable after construction.
class EntityDatabase {
 public:
  EntityDatabase() = default;
  explicit EntityDatabase(std::vector<LanguageTable> tables, Limits limits = {});

  static EntityDatabase from_json(const nlohmann::json& doc, Limits limits = {});

  bool has_language(std::string_view code) const;
  /// Throws mwploc::Error for unknown languages.
  const LanguageTable& language(std::string_view code) const;
  /// Sorted by code.
  std::vector<std::string> languages() const;

 private:
  std::map<std::string, LanguageTable, std::less<>> tables_;
};

/// Reads the database file. Throws ParseError / ValidationError.
EntityDatabase load_db(const std::filesystem::path& path, Limits limits = {});

/// Hands out replacements for the entities of one record. Distinct sources
/// get distinct candidates, no candidate equals (case-insensitively) any
/// reserved string, and a source seen twice gets the same answer.
///
/// The starting slot is stable_hash(seed, record_id, kind, folded source) mod
/// |candidates|; occupied or reserved slots are skipped by linear probing.
class RecordPicker {
 public:
  RecordPicker(const EntityDatabase& db, std::string lang, std::string record_id,
               std::uint64_t seed, const std::vector<std::string>& reserved = {});

  /// Throws CandidateExhaustedError when every candidate is taken or reserved.
  std::string pick(EntityKind kind, std::string_view source);

 private:
  const LanguageTable& table_;
  std::string record_id_;
  std::uint64_t seed_;
  std::vector<std::u32string> reserved_;
  std::map<std::pair<EntityKind, std::u32string>, std::string> assigned_;
  std::vector<std::u32string> taken_;
};

std::string pick_replacement(const EntityDatabase& db, std::string_view lang, EntityKind kind,
                             std::string_view source, std::string_view record_id,
                             std::uint64_t seed);

}  // namespace mwploc::entitydb
