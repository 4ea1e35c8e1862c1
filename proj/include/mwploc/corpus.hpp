#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mwploc/quality.hpp"
#include "mwploc/replace.hpp"

namespace mwploc::corpus {

using Json = nlohmann::ordered_json;

enum class Split { train, test };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct MwpRecord {
  std::string id;
  std::string lang;
  Split split = Split::test;
  std::string x_en;
  std::optional<std::string> x_trans;
  std::string answer_raw;
  std::optional<double> answer_num;  // extract_answer(answer_raw)
  Json extra = Json::object();       // unknown input fields, in input order

  bool operator==(const MwpRecord&) const = default;
};

enum class Status { localized, fallback, no_entities };

std::string_view to_string(Status status);
Status parse_status(std::string_view name);

struct LocalizedRecord {
  MwpRecord base;
  std::optional<std::string> x_ent;
  std::string x_loc;
  Status status = Status::fallback;
  std::optional<replace::ReplacementDict> replacements;
  std::optional<quality::QualityReport> quality;
  std::optional<std::string> failure_reason;

  bool operator==(const LocalizedRecord&) const = default;
};

/// Throws ValidationError.
void validate(const MwpRecord& rec);
void validate(const LocalizedRecord& rec);

/// Output-stage keys. Reading an input record drops them so that a localized
/// file can be fed back into the pipeline.
bool is_output_key(std::string_view key);

Json to_json(const MwpRecord& rec);
Json to_json(const LocalizedRecord& rec);
Json to_json(const replace::ReplacementDict& dict);
Json to_json(const quality::QualityReport& report);

/// `line` and `source` only feed error messages.
MwpRecord record_from_json(const Json& obj, const std::string& source = {}, std::size_t line = 0);
LocalizedRecord localized_from_json(const Json& obj, const std::string& source = {},
                                    std::size_t line = 0);

/// One JSON object per line. Throws ParseError naming the line and field.
std::vector<MwpRecord> read_records(std::istream& in, const std::string& source = {});
std::vector<MwpRecord> load_records(const std::filesystem::path& path);

std::vector<LocalizedRecord> read_localized(std::istream& in, const std::string& source = {});
std::vector<LocalizedRecord> load_localized(const std::filesystem::path& path);

/// Validates every record before writing anything.
void write_records(std::span<const LocalizedRecord> records, std::ostream& out);
void save_records(std::span<const LocalizedRecord> records, const std::filesystem::path& path);

/// Writes `bytes` to `path` through a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace mwploc::corpus
