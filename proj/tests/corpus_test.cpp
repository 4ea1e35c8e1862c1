#include <doctest.h>

#include <sstream>

#include "mwploc/corpus.hpp"
#include "mwploc/error.hpp"
#include "support.hpp"

using namespace mwploc;

namespace {

corpus::MwpRecord sample() {
  corpus::MwpRecord r;
  r.id = "r1";
  r.lang = "swa";
  r.split = corpus::Split::test;
  r.x_en = testing::kEn;
  r.x_trans = testing::kTrans;
  r.answer_raw = "106";
  r.answer_num = 106.0;
  return r;
}

}  // namespace

TEST_CASE("golden record loads") {
  const auto recs = corpus::load_records(testing::golden_dir() / "records.jsonl");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0] == sample());
}

TEST_CASE("unknown input fields survive a round trip in order") {
  std::istringstream in(
      R"({"id":"a","lang":"yor","split":"train","x_en":"Sam has 3 pens.","answer":"3","source":"gsm","k":1})"
      "\n");
  auto recs = corpus::read_records(in);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].extra.dump() == R"({"source":"gsm","k":1})");
  CHECK(corpus::to_json(recs[0]).dump() ==
        R"({"id":"a","lang":"yor","split":"train","x_en":"Sam has 3 pens.","answer":"3","answer_num":3.0,"source":"gsm","k":1})");
}

TEST_CASE("malformed lines name the line and the field") {
  std::istringstream in(
      R"({"id":"a","lang":"swa","split":"train","x_en":"x","answer":"1"})"
      "\n"
      R"({"lang":"swa","split":"train","x_en":"x","answer":"1"})"
      "\n");
  try {
    corpus::read_records(in, "in.jsonl");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("in.jsonl:2") != std::string::npos);
    CHECK(msg.find("'id'") != std::string::npos);
  }
}

TEST_CASE("duplicate ids and missing translations on the test split are rejected") {
  std::istringstream dup(
      R"({"id":"a","lang":"swa","split":"train","x_en":"x","answer":"1"})"
      "\n"
      R"({"id":"a","lang":"swa","split":"train","x_en":"y","answer":"2"})"
      "\n");
  CHECK_THROWS_AS(corpus::read_records(dup), ParseError);

  std::istringstream no_trans(R"({"id":"a","lang":"swa","split":"test","x_en":"x","answer":"1"})"
                              "\n");
  CHECK_THROWS(corpus::read_records(no_trans));
}

TEST_CASE("not json is a parse error") {
  std::istringstream in("{not json}\n");
  CHECK_THROWS_AS(corpus::read_records(in), ParseError);
}

TEST_CASE("blank lines are skipped") {
  std::istringstream in("\n" R"({"id":"a","lang":"swa","split":"train","x_en":"x","answer":"1"})" "\n\n");
  CHECK(corpus::read_records(in).size() == 1);
}

TEST_CASE("localized records round trip") {
  corpus::LocalizedRecord rec;
  rec.base = sample();
  rec.x_ent = testing::kEnt;
  rec.x_loc = testing::kLoc;
  rec.status = corpus::Status::localized;
  rec.replacements = replace::ReplacementDict{{{"Mandy", "Camari", replace::EntryKind::person}}};
  quality::QualityReport q;
  q.length_ratio = 1.0;
  q.length_ok = q.key_entities_absent = q.replacements_present = q.similarity_ok = q.passed = true;
  q.similarity = 0.85;
  rec.quality = q;

  std::ostringstream out;
  corpus::write_records(std::vector{rec}, out);
  std::istringstream in(out.str());
  const auto back = corpus::read_localized(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == rec);

  // Feeding a localized file back as input drops the output-stage keys.
  std::istringstream again(out.str());
  const auto as_input = corpus::read_records(again);
  CHECK(as_input[0] == sample());
}

TEST_CASE("fallback without reason or with altered text is refused") {
  corpus::LocalizedRecord rec;
  rec.base = sample();
  rec.status = corpus::Status::fallback;
  rec.x_loc = *rec.base.x_trans;
  CHECK_THROWS_AS(corpus::validate(rec), ValidationError);
  rec.failure_reason = "llm_error: timeout";
  CHECK_NOTHROW(corpus::validate(rec));
  rec.x_loc += " ";
  CHECK_THROWS_AS(corpus::validate(rec), ValidationError);
}

TEST_CASE("atomic write replaces content") {
  testing::TempDir dir;
  corpus::write_file_atomic(dir / "f.txt", "one");
  corpus::write_file_atomic(dir / "f.txt", "two");
  CHECK(testing::read_file(dir / "f.txt") == "two");
}
