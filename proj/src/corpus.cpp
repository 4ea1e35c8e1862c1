#include "mwploc/corpus.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "mwploc/answer.hpp"
#include "mwploc/error.hpp"

namespace mwploc::corpus {

namespace {

constexpr std::array<std::string_view, 7> kInputKeys = {"id", "lang", "split", "x_en",
                                                       "x_trans", "answer", "answer_num"};
constexpr std::array<std::string_view, 6> kOutputKeys = {"x_ent",        "x_loc", "status",
                                                        "replacements", "quality",
                                                        "failure_reason"};

bool is_input_key(std::string_view key) {
  for (auto k : kInputKeys)
    if (k == key) return true;
  return false;
}

struct FieldReader {
  const Json& obj;
  const std::string& source;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, what); }

  const Json* find(std::string_view key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  std::string string(std::string_view key) const {
    const Json* v = find(key);
    if (!v) fail("missing field '" + std::string(key) + "'");
    if (!v->is_string()) fail("field '" + std::string(key) + "' must be a string");
    return v->get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view key) const {
    const Json* v = find(key);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_string()) fail("field '" + std::string(key) + "' must be a string");
    return v->get<std::string>();
  }

  bool boolean(const Json& o, std::string_view key) const {
    auto it = o.find(key);
    if (it == o.end() || !it->is_boolean()) fail("field 'quality." + std::string(key) + "' must be a boolean");
    return it->get<bool>();
  }

  double number(const Json& o, std::string_view key) const {
    auto it = o.find(key);
    if (it == o.end() || !it->is_number()) fail("field 'quality." + std::string(key) + "' must be a number");
    return it->get<double>();
  }

  std::vector<std::string> strings(const Json& o, std::string_view key) const {
    auto it = o.find(key);
    if (it == o.end() || !it->is_array()) fail("field 'quality." + std::string(key) + "' must be an array");
    std::vector<std::string> out;
    for (const auto& s : *it) {
      if (!s.is_string()) fail("field 'quality." + std::string(key) + "' must hold strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  }
};

Json parse_line(const std::string& line, const std::string& source, std::size_t lineno) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, lineno, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(source, lineno, "record must be a JSON object");
  return obj;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

template <typename Record, typename Convert>
std::vector<Record> read_lines(std::istream& in, const std::string& source, Convert convert) {
  std::vector<Record> out;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF"))
      throw ParseError(source, lineno, "byte order mark not allowed");
    if (blank(line)) continue;
    Record rec = convert(parse_line(line, source, lineno), source, lineno);
    const std::string& id = [&]() -> const std::string& {
      if constexpr (std::is_same_v<Record, MwpRecord>) return rec.id;
      else return rec.base.id;
    }();
    if (!ids.insert(id).second) throw ParseError(source, lineno, "duplicate id '" + id + "'");
    out.push_back(std::move(rec));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view to_string(Split split) { return split == Split::train ? "train" : "test"; }

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  throw ValidationError("unknown split '" + std::string(name) + "'");
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::localized: return "localized";
    case Status::fallback: return "fallback";
    case Status::no_entities: return "no_entities";
  }
  return "fallback";
}

Status parse_status(std::string_view name) {
  if (name == "localized") return Status::localized;
  if (name == "fallback") return Status::fallback;
  if (name == "no_entities") return Status::no_entities;
  throw ValidationError("unknown status '" + std::string(name) + "'");
}

bool is_output_key(std::string_view key) {
  for (auto k : kOutputKeys)
    if (k == key) return true;
  return false;
}

void validate(const MwpRecord& rec) {
  if (rec.id.empty()) throw ValidationError("record id must be non-empty");
  if (rec.lang.empty()) throw ValidationError("record '" + rec.id + "': lang must be non-empty");
  if (rec.x_en.empty()) throw ValidationError("record '" + rec.id + "': x_en must be non-empty");
  if (rec.split == Split::test && !rec.x_trans)
    throw ValidationError("record '" + rec.id + "': test records need x_trans");
  if (evalkit::extract_answer(rec.answer_raw) != rec.answer_num)
    throw ValidationError("record '" + rec.id + "': answer_num disagrees with answer");
  if (!rec.extra.is_object()) throw ValidationError("record '" + rec.id + "': extra must be an object");
}

void validate(const LocalizedRecord& rec) {
  validate(rec.base);
  const std::string& id = rec.base.id;
  if (rec.status == Status::localized) {
    if (!rec.quality || !rec.quality->passed)
      throw ValidationError("record '" + id + "': localized status requires a passing quality report");
    if (!rec.replacements) throw ValidationError("record '" + id + "': localized status requires replacements");
  } else {
    if (!rec.base.x_trans || rec.x_loc != *rec.base.x_trans)
      throw ValidationError("record '" + id + "': x_loc must equal x_trans when not localized");
  }
  if (rec.status == Status::fallback && (!rec.failure_reason || rec.failure_reason->empty()))
    throw ValidationError("record '" + id + "': fallback requires a failure_reason");
  if (rec.quality) quality::validate(*rec.quality);
  if (rec.replacements) replace::validate(*rec.replacements);
}

Json to_json(const replace::ReplacementDict& dict) {
  Json arr = Json::array();
  for (const auto& e : dict.entries) {
    Json o = Json::object();
    o["source"] = e.source;
    o["target"] = e.target;
    o["kind"] = std::string(replace::to_string(e.kind));
    arr.push_back(std::move(o));
  }
  return arr;
}

Json to_json(const quality::QualityReport& q) {
  Json o = Json::object();
  o["length_ratio"] = q.length_ratio;
  o["length_ok"] = q.length_ok;
  o["key_entities_absent"] = q.key_entities_absent;
  o["offending"] = q.offending;
  o["replacements_present"] = q.replacements_present;
  o["missing"] = q.missing;
  o["similarity"] = q.similarity;
  o["similarity_ok"] = q.similarity_ok;
  o["passed"] = q.passed;
  return o;
}

Json to_json(const MwpRecord& rec) {
  Json o = Json::object();
  o["id"] = rec.id;
  o["lang"] = rec.lang;
  o["split"] = std::string(to_string(rec.split));
  o["x_en"] = rec.x_en;
  if (rec.x_trans) o["x_trans"] = *rec.x_trans;
  o["answer"] = rec.answer_raw;
  if (rec.answer_num) o["answer_num"] = *rec.answer_num;
  for (const auto& [key, value] : rec.extra.items())
    if (!o.contains(key) && !is_output_key(key)) o[key] = value;
  return o;
}

Json to_json(const LocalizedRecord& rec) {
  Json o = to_json(rec.base);
  if (rec.x_ent) o["x_ent"] = *rec.x_ent;
  o["x_loc"] = rec.x_loc;
  o["status"] = std::string(to_string(rec.status));
  if (rec.replacements) o["replacements"] = to_json(*rec.replacements);
  if (rec.quality) o["quality"] = to_json(*rec.quality);
  if (rec.failure_reason) o["failure_reason"] = *rec.failure_reason;
  return o;
}

MwpRecord record_from_json(const Json& obj, const std::string& source, std::size_t line) {
  FieldReader r{obj, source, line};
  MwpRecord rec;
  rec.id = r.string("id");
  if (rec.id.empty()) r.fail("field 'id' must be non-empty");
  rec.lang = r.string("lang");
  try {
    rec.split = parse_split(r.string("split"));
  } catch (const ValidationError& e) {
    r.fail(std::string("field 'split': ") + e.what());
  }
  rec.x_en = r.string("x_en");
  if (rec.x_en.empty()) r.fail("field 'x_en' must be non-empty");
  rec.x_trans = r.optional_string("x_trans");

  const Json* answer = r.find("answer");
  if (!answer) r.fail("missing field 'answer'");
  if (answer->is_string()) rec.answer_raw = answer->get<std::string>();
  else if (answer->is_number()) rec.answer_raw = answer->dump();
  else r.fail("field 'answer' must be a string or number");
  rec.answer_num = evalkit::extract_answer(rec.answer_raw);
  if (const Json* num = r.find("answer_num"); num && !num->is_null()) {
    if (!num->is_number()) r.fail("field 'answer_num' must be a number");
    if (num->get<double>() != rec.answer_num)
      r.fail("field 'answer_num' disagrees with the value parsed from 'answer'");
  }

  for (const auto& [key, value] : obj.items())
    if (!is_input_key(key) && !is_output_key(key)) rec.extra[key] = value;

  try {
    validate(rec);
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }
  return rec;
}

LocalizedRecord localized_from_json(const Json& obj, const std::string& source, std::size_t line) {
  FieldReader r{obj, source, line};
  LocalizedRecord rec;
  rec.base = record_from_json(obj, source, line);
  rec.x_ent = r.optional_string("x_ent");
  rec.x_loc = r.string("x_loc");
  try {
    rec.status = parse_status(r.string("status"));
  } catch (const ValidationError& e) {
    r.fail(std::string("field 'status': ") + e.what());
  }
  if (const Json* reps = r.find("replacements"); reps && !reps->is_null()) {
    if (!reps->is_array()) r.fail("field 'replacements' must be an array");
    replace::ReplacementDict dict;
    for (const auto& e : *reps) {
      if (!e.is_object() || !e.contains("source") || !e.contains("target") || !e.contains("kind"))
        r.fail("field 'replacements' entries need source, target and kind");
      try {
        dict.entries.push_back({e.at("source").get<std::string>(), e.at("target").get<std::string>(),
                                replace::parse_entry_kind(e.at("kind").get<std::string>())});
      } catch (const std::exception& ex) {
        r.fail(std::string("field 'replacements': ") + ex.what());
      }
    }
    rec.replacements = std::move(dict);
  }
  if (const Json* q = r.find("quality"); q && !q->is_null()) {
    if (!q->is_object()) r.fail("field 'quality' must be an object");
    quality::QualityReport report;
    report.length_ratio = r.number(*q, "length_ratio");
    report.length_ok = r.boolean(*q, "length_ok");
    report.key_entities_absent = r.boolean(*q, "key_entities_absent");
    report.offending = r.strings(*q, "offending");
    report.replacements_present = r.boolean(*q, "replacements_present");
    report.missing = r.strings(*q, "missing");
    report.similarity = r.number(*q, "similarity");
    report.similarity_ok = r.boolean(*q, "similarity_ok");
    report.passed = r.boolean(*q, "passed");
    rec.quality = std::move(report);
  }
  rec.failure_reason = r.optional_string("failure_reason");
  try {
    validate(rec);
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }
  return rec;
}

std::vector<MwpRecord> read_records(std::istream& in, const std::string& source) {
  return read_lines<MwpRecord>(in, source, record_from_json);
}

std::vector<MwpRecord> load_records(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_records(in, path.string());
}

std::vector<LocalizedRecord> read_localized(std::istream& in, const std::string& source) {
  return read_lines<LocalizedRecord>(in, source, localized_from_json);
}

std::vector<LocalizedRecord> load_localized(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_localized(in, path.string());
}

void write_records(std::span<const LocalizedRecord> records, std::ostream& out) {
  for (const auto& rec : records) validate(rec);
  for (const auto& rec : records) out << to_json(rec).dump() << '\n';
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot write " + path.string());
  }
}

void save_records(std::span<const LocalizedRecord> records, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_records(records, buf);
  write_file_atomic(path, buf.str());
}

}  // namespace mwploc::corpus
