#include <doctest.h>

#include "mwploc/entitydb.hpp"
#include "mwploc/error.hpp"
#include "mwploc/localize.hpp"
#include "support.hpp"

using namespace mwploc;

namespace {

const entitydb::EntityDatabase& db() {
  static const auto d = entitydb::load_db(testing::db_path());
  return d;
}

corpus::MwpRecord golden() {
  corpus::MwpRecord r;
  r.id = "r1";
  r.lang = "swa";
  r.x_en = testing::kEn;
  r.x_trans = testing::kTrans;
  r.answer_raw = "106";
  r.answer_num = 106;
  return r;
}

corpus::LocalizedRecord run(const corpus::MwpRecord& rec, std::map<std::string, std::string> fixtures,
                            const localize::LocalizationConfig& cfg = {}) {
  llm::MockLlmClient mock(std::move(fixtures));
  return localize::localize_record(rec, db(), mock, cfg);
}

void check_fallback(const corpus::LocalizedRecord& out, const std::string& prefix) {
  CHECK(out.status == corpus::Status::fallback);
  CHECK(out.x_loc == *out.base.x_trans);
  REQUIRE(out.failure_reason.has_value());
  CHECK_MESSAGE(out.failure_reason->rfind(prefix, 0) == 0, *out.failure_reason);
  CHECK_NOTHROW(corpus::validate(out));
}

}  // namespace

TEST_CASE("one-shot prompt carries the demonstration and the record") {
  const auto p = localize::build_oneshot_prompt(testing::kEn, testing::kTrans, testing::kEnt, "Swahili");
  CHECK(p.find("DO NOT re-translate the entire sentence") != std::string::npos);
  CHECK(p.find("Janet") != std::string::npos);
  CHECK(p.find("Andrea") != std::string::npos);
  const auto en = p.find(testing::kEn), tr = p.find(testing::kTrans), ent = p.find(testing::kEnt);
  REQUIRE(en != std::string::npos);
  REQUIRE(tr != std::string::npos);
  REQUIRE(ent != std::string::npos);
  CHECK(en < tr);
  CHECK(tr < ent);
  CHECK(p.size() >= std::string("Modified Native (Swahili):").size());
  CHECK(p.substr(p.size() - std::string("Modified Native (Swahili):").size()) == "Modified Native (Swahili):");

  const auto ctx =
      localize::build_oneshot_prompt(testing::kEn, testing::kTrans, testing::kEnt, "Swahili", "oneshot_context_v1");
  CHECK(ctx.find("Janet") == std::string::npos);
  CHECK(ctx.find(testing::kTrans) != std::string::npos);
  CHECK_THROWS(localize::build_oneshot_prompt("a", "b", "c", "Swahili", "oneshot_v9"));
}

TEST_CASE("golden record localizes") {
  const auto out = run(golden(), {{"extract:r1", testing::kExtractReply}, {"loc:r1", testing::kLoc}});
  CHECK(out.status == corpus::Status::localized);
  CHECK(out.x_ent == testing::kEnt);
  CHECK(out.x_loc == testing::kLoc);
  REQUIRE(out.quality.has_value());
  CHECK(out.quality->passed);
  CHECK_FALSE(out.failure_reason.has_value());
}

TEST_CASE("model output is trimmed") {
  const auto out = run(golden(), {{"extract:r1", testing::kExtractReply}, {"loc:r1", "\n  " + testing::kLoc + "\n"}});
  CHECK(out.x_loc == testing::kLoc);
}

TEST_CASE("no entities passes the translation through") {
  auto rec = golden();
  rec.x_en = "There are 5 apples and 3 pears. How many fruits?";
  rec.x_trans = "Kuna tufaha 5 na pea 3. Matunda mangapi?";
  llm::MockLlmClient mock(std::map<std::string, std::string>{
      {"extract:r1", R"({"personal_names":[],"organization_names":[],"currencies":[]})"}});
  const auto out = localize::localize_record(rec, db(), mock, {});
  CHECK(out.status == corpus::Status::no_entities);
  CHECK(out.x_loc == *rec.x_trans);
  CHECK(mock.request_count() == 1);
}

TEST_CASE("hallucinated entities count as none") {
  auto rec = golden();
  rec.x_en = "There are 5 apples.";
  rec.x_trans = "Kuna tufaha 5.";
  const auto out = run(rec, {{"extract:r1", R"({"personal_names":["Zed"]})"}});
  CHECK(out.status == corpus::Status::no_entities);
}

TEST_CASE("fallback reasons") {
  check_fallback(run(golden(), {}), "extraction_failed:");

  auto yen = golden();
  yen.x_en = "Mandy paid $ 5 and ¥ 300.";
  check_fallback(run(yen, {{"extract:r1", R"({"personal_names":["Mandy"],"currencies":["$","¥"]})"}}),
                 "multi_currency:");

  auto euro = golden();
  euro.x_en = "Mandy paid 5 euros.";
  check_fallback(run(euro, {{"extract:r1", R"({"personal_names":["Mandy"],"currencies":["euros"]})"}}),
                 "unsupported_currency:");

  auto many = golden();
  many.x_en = "Acme, Bolt, Crux, Dyne and Echo each earn 5 coins.";
  check_fallback(run(many, {{"extract:r1", R"({"organization_names":["Acme","Bolt","Crux","Dyne","Echo"]})"}}),
                 "insufficient_candidates:");

  check_fallback(run(golden(), {{"extract:r1", testing::kExtractReply}}), "llm_error:");

  auto unknown = golden();
  unknown.lang = "xyz";
  check_fallback(run(unknown, {{"extract:r1", testing::kExtractReply}, {"loc:r1", testing::kLoc}}), "unknown_language:");

  std::string kept = testing::kLoc;
  kept.replace(kept.find("Camari"), 6, "Mandy");
  check_fallback(run(golden(), {{"extract:r1", testing::kExtractReply}, {"loc:r1", kept}}), "key_entity_present:");
}

TEST_CASE("missing translation is a caller error") {
  auto rec = golden();
  rec.x_trans.reset();
  llm::MockLlmClient mock;
  CHECK_THROWS_AS(localize::localize_record(rec, db(), mock, {}), std::invalid_argument);
}

TEST_CASE("config validation") {
  localize::LocalizationConfig cfg;
  CHECK_NOTHROW(localize::validate(cfg));
  cfg.similarity_threshold = 1.5;
  CHECK_THROWS_AS(localize::validate(cfg), ValidationError);
  cfg = {};
  cfg.length_lower = 2.0;
  CHECK_THROWS_AS(localize::validate(cfg), ValidationError);
  cfg = {};
  cfg.prompt_version = "nope";
  CHECK_THROWS_AS(localize::validate(cfg), ValidationError);
  cfg = {};
  cfg.max_llm_retries = -1;
  CHECK_THROWS_AS(localize::validate(cfg), ValidationError);
}

TEST_CASE("parallel runs keep order and results") {
  std::vector<corpus::MwpRecord> recs;
  std::map<std::string, std::string> fixtures;
  for (int i = 0; i < 24; ++i) {
    auto r = golden();
    r.id = "r" + std::to_string(i);
    recs.push_back(r);
    fixtures["extract:" + r.id] = testing::kExtractReply;
    fixtures["loc:" + r.id] = testing::kLoc;  // only fits records whose picks match r1
  }
  llm::MockLlmClient serial_llm(fixtures), parallel_llm(fixtures);
  const auto serial = localize::localize_all(recs, db(), serial_llm, {}, 1);
  const auto parallel = localize::localize_all(recs, db(), parallel_llm, {}, 8);
  REQUIRE(serial.size() == recs.size());
  CHECK(serial == parallel);
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(parallel[i].base.id == recs[i].id);
}

TEST_CASE("direct baseline returns the reply verbatim") {
  llm::MockLlmClient mock(std::map<std::string, std::string>{{"direct", "Jibu la moja kwa moja."}});
  CHECK(localize::direct_localize(testing::kEn, "Swahili", mock) == "Jibu la moja kwa moja.");
  CHECK_THROWS_AS(localize::direct_localize("", "Swahili", mock), std::invalid_argument);
}
