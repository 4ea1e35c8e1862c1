#include <doctest.h>

#include <set>

#include "mwploc/entitydb.hpp"
#include "mwploc/error.hpp"
#include "mwploc/text.hpp"
#include "support.hpp"

using namespace mwploc;
using entitydb::EntityKind;

namespace {

entitydb::LanguageTable table(std::string code, std::size_t names) {
  entitydb::LanguageTable t;
  t.code = code;
  t.display_name = "Test " + code;
  for (std::size_t i = 0; i < names; ++i) t.personal_names.push_back("Name" + std::string(1, char('A' + i)));
  t.organization_names = {"Org One", "Org Two", "Org Three"};
  t.currency = {{"$"}, {"dollar", "dollars"}, "coins"};
  return t;
}

}  // namespace

TEST_CASE("shipped database loads with at least three languages") {
  const auto db = entitydb::load_db(testing::db_path());
  const auto langs = db.languages();
  CHECK(langs.size() >= 3);
  CHECK(std::is_sorted(langs.begin(), langs.end()));
  const auto& swa = db.language("swa");
  CHECK(swa.display_name == "Swahili");
  CHECK(swa.currency.target_word == "shilingi");
  for (const char* n : {"Camari", "Julani"})
    CHECK(std::find(swa.personal_names.begin(), swa.personal_names.end(), n) != swa.personal_names.end());
  CHECK_THROWS_AS(db.language("xxx"), Error);
}

TEST_CASE("golden picks") {
  const auto db = entitydb::load_db(testing::db_path());
  entitydb::RecordPicker picker(db, "swa", "r1", 42, {"Mandy", "Benedict"});
  CHECK(picker.pick(EntityKind::person, "Mandy") == "Camari");
  CHECK(picker.pick(EntityKind::person, "Benedict") == "Julani");
  CHECK(picker.pick(EntityKind::person, "mandy") == "Camari");
}

TEST_CASE("validation") {
  CHECK_NOTHROW(entitydb::EntityDatabase({table("aaa", 8)}));
  CHECK_THROWS_AS(entitydb::EntityDatabase({table("aaa", 7)}), ValidationError);
  auto dup = table("aaa", 8);
  dup.personal_names[1] = "namea";
  CHECK_THROWS_AS(entitydb::EntityDatabase({dup}), ValidationError);
  auto no_target = table("aaa", 8);
  no_target.currency.target_word.clear();
  CHECK_THROWS_AS(entitydb::EntityDatabase({no_target}), ValidationError);
  CHECK_THROWS_AS(entitydb::EntityDatabase({table("aaa", 8), table("aaa", 8)}), ValidationError);
}

TEST_CASE("json errors name the language") {
  const auto doc = nlohmann::json::parse(R"({"languages":{"kin":{"display_name":"Kinyarwanda",
    "personal_names":["A","B","C","D","E","F","G","H"],"organization_names":["X","Y","Z"]}}})");
  try {
    entitydb::EntityDatabase::from_json(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("kin") != std::string::npos);
  }
  CHECK_THROWS_AS(entitydb::EntityDatabase::from_json(nlohmann::json::parse("[]")), ValidationError);
}

TEST_CASE("corrupt file") {
  testing::TempDir dir;
  testing::write_file(dir / "db.json", "{\"languages\": {");
  CHECK_THROWS_AS(entitydb::load_db(dir / "db.json"), Error);
  CHECK_THROWS_AS(entitydb::load_db(dir / "absent.json"), Error);
}

TEST_CASE("picker properties") {
  const entitydb::EntityDatabase db({table("aaa", 8)});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    entitydb::RecordPicker picker(db, "aaa", "rec" + std::to_string(seed), seed, {"NameC"});
    std::set<std::string> got;
    for (int i = 0; i < 7; ++i) {
      const auto name = picker.pick(EntityKind::person, "Source" + std::to_string(i));
      CHECK(name != "NameC");
      CHECK(got.insert(name).second);
    }
    CHECK_THROWS_AS(picker.pick(EntityKind::person, "Overflow"), CandidateExhaustedError);
  }
}

TEST_CASE("a source equal to a candidate is never mapped to itself") {
  const entitydb::EntityDatabase db({table("aaa", 8)});
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    CHECK(entitydb::pick_replacement(db, "aaa", EntityKind::person, "NameA", "r", seed) != "NameA");
}

TEST_CASE("picks are deterministic and seed dependent") {
  const auto db = entitydb::load_db(testing::db_path());
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = entitydb::pick_replacement(db, "swa", EntityKind::person, "Mandy", "r1", seed);
    CHECK(a == entitydb::pick_replacement(db, "swa", EntityKind::person, "Mandy", "r1", seed));
    seen.insert(a);
  }
  CHECK(seen.size() > 1);
}
