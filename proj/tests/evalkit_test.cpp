#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "mwploc/answer.hpp"
#include "mwploc/error.hpp"
#include "mwploc/evalkit.hpp"
#include "oracles/answer_oracle.hpp"
#include "oracles/filter_oracle.hpp"

using namespace mwploc;
using namespace mwploc::evalkit;

namespace {

corpus::MwpRecord gold(std::string id, std::string lang, std::string answer) {
  corpus::MwpRecord r;
  r.id = std::move(id);
  r.lang = std::move(lang);
  r.split = corpus::Split::train;
  r.x_en = "q";
  r.answer_raw = answer;
  r.answer_num = extract_answer(answer);
  return r;
}

std::vector<ScoredTranslation> synthetic_scores(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> hundredths(0, 100);
  std::vector<ScoredTranslation> out;
  for (const char* lang : {"swa", "yor", "zul"})
    for (int i = 0; i < 50; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "q%03d", static_cast<int>(rng() % 1000));
      // Hundredths produce plenty of ties, including exactly 0.65.
      out.push_back({std::string(id) + "-" + std::to_string(i), lang, hundredths(rng) / 100.0});
    }
  return out;
}

}  // namespace

TEST_CASE("answer extraction examples") {
  CHECK(extract_answer("She gives Julani 106.") == 106.0);
  CHECK(extract_answer("Answer: 1,234 dollars") == 1234.0);
  CHECK_FALSE(extract_answer("no numbers here").has_value());
  CHECK(extract_answer("shilingi 106") == 106.0);
  CHECK(extract_answer("The rate is 2% so 12.5%") == 12.5);
  CHECK(extract_answer("it fell to -3") == -3.0);
  CHECK(extract_answer("Room B-12") == 12.0);
  CHECK(extract_answer("$0.75") == 0.75);
  CHECK(extract_answer("costs .5") == 0.5);
  CHECK(extract_answer("1,000,000 people") == 1000000.0);
  CHECK(extract_answer("5,000.5 litres") == 5000.5);
  CHECK(extract_answer("0.5,000") == 0.0);
}

TEST_CASE("answer extraction agrees with the regex reference") {
  const std::string alphabet = "0123456789,.-$% aZ";
  std::mt19937 rng(99);
  for (int n = 0; n < 5000; ++n) {
    std::string s;
    const int len = static_cast<int>(rng() % 20);
    for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    const auto got = extract_answer(s);
    const auto want = oracle::answer(s);
    REQUIRE_MESSAGE(got.has_value() == want.has_value(), s);
    if (got) CHECK_MESSAGE(*got == *want, s);
  }
}

TEST_CASE("numeric and exact match") {
  CHECK(numeric_match("106.000000", 106));
  CHECK_FALSE(numeric_match("105", 106));
  CHECK(numeric_match("shilingi 106", 106));
  CHECK(numeric_match("0.3333333", 1.0 / 3.0, 1e-6));
  CHECK_FALSE(numeric_match("0.33", 1.0 / 3.0));
  CHECK_FALSE(numeric_match("nothing", 1));
  CHECK(exact_match("106", "106"));
  CHECK(exact_match(" 106 ", "106"));
  CHECK_FALSE(exact_match("106.0", "106"));
}

TEST_CASE("evaluate averages over prompt variants") {
  std::vector<corpus::MwpRecord> golds;
  for (int i = 0; i < 10; ++i) golds.push_back(gold("g" + std::to_string(i), "swa", std::to_string(i)));
  Predictions preds;
  const std::map<std::string, int> correct = {{"a", 5}, {"b", 6}, {"c", 7}};
  for (const auto& [p, k] : correct)
    for (int i = 0; i < 10; ++i) preds[p]["g" + std::to_string(i)] = i < k ? std::to_string(i) : "x";
  const auto rep = evaluate(preds, golds);
  CHECK(rep.n_records == 10);
  CHECK(rep.aggregate_nm == doctest::Approx(0.6));
  CHECK(rep.aggregate_em == doctest::Approx(0.6));
  REQUIRE(rep.per_prompt.size() == 3);
  CHECK(rep.per_prompt[0].prompt_id == "a");
  CHECK(rep.per_prompt[0].nm == doctest::Approx(0.5));

  Predictions one{{"only", preds["b"]}};
  CHECK(evaluate(one, golds).aggregate_nm == doctest::Approx(0.6));

  auto missing = preds;
  missing["b"].erase("g3");
  CHECK_THROWS_AS(evaluate(missing, golds), ValidationError);
  auto extra = preds;
  extra["a"]["stranger"] = "1";
  CHECK_THROWS_AS(evaluate(extra, golds), ValidationError);
  CHECK_THROWS_AS(evaluate({}, golds), ValidationError);
}

TEST_CASE("per-language reports") {
  std::vector<corpus::MwpRecord> golds = {gold("a", "swa", "1"), gold("b", "swa", "2"), gold("c", "yor", "3")};
  Predictions preds{{"p", {{"a", "1"}, {"b", "0"}, {"c", "3"}}}};
  const auto by = evaluate_by_language(preds, golds);
  CHECK(by.at("all").aggregate_nm == doctest::Approx(2.0 / 3.0));
  CHECK(by.at("swa").aggregate_nm == doctest::Approx(0.5));
  CHECK(by.at("yor").aggregate_nm == doctest::Approx(1.0));
  CHECK(by.at("yor").n_records == 1);
}

TEST_CASE("delta convention") {
  EvalReport loc, trans;
  loc.n_records = trans.n_records = 100;
  loc.aggregate_nm = 0.54;
  trans.aggregate_nm = 0.50;
  CHECK(delta_nm(loc, trans, "swa") == doctest::Approx(0.04));
  CHECK(classify_delta(delta_nm(loc, trans, "swa")) == DeltaSign::positive);
  loc.aggregate_nm = 0.40;
  trans.aggregate_nm = 0.40;
  CHECK(classify_delta(delta_nm(loc, trans, "swa")) == DeltaSign::neutral);
  loc.aggregate_nm = 0.30;
  CHECK(classify_delta(delta_nm(loc, trans, "swa")) == DeltaSign::negative);
  trans.n_records = 99;
  CHECK_THROWS_AS(delta_nm(loc, trans, "swa"), ValidationError);
}

TEST_CASE("delta table rendering") {
  EvalReport a, b;
  a.n_records = b.n_records = 2;
  a.aggregate_nm = 1.0;
  b.aggregate_nm = 0.5;
  const auto rows = delta_table({{"swa", a}, {"yor", b}, {"zul", a}}, {{"swa", b}, {"yor", b}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].lang == "swa");
  CHECK(rows[0].sign == DeltaSign::positive);
  CHECK(rows[1].sign == DeltaSign::neutral);
  const auto txt = render_delta_table(rows);
  CHECK(txt.find("+0.5000") != std::string::npos);
  CHECK(txt.find("languages with delta_NM > 0: 1") != std::string::npos);
}

TEST_CASE("report json round trip") {
  std::vector<corpus::MwpRecord> golds = {gold("a", "swa", "1"), gold("b", "swa", "2")};
  const auto rep = evaluate({{"p", {{"a", "1"}, {"b", "3"}}}, {"q", {{"a", "1"}, {"b", "2"}}}}, golds);
  CHECK(eval_report_from_json(to_json(rep)) == rep);
  CHECK_THROWS_AS(eval_report_from_json(nlohmann::ordered_json::object()), ValidationError);
}

TEST_CASE("scores file parsing") {
  std::istringstream ok("record_id, lang, score\nr1, swa, 0.9\nr2,swa,0.1\n\nr1, yor, 1\n");
  const auto s = read_scores(ok, "s.csv");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == ScoredTranslation{"r1", "swa", 0.9});
  CHECK(s[2] == ScoredTranslation{"r1", "yor", 1.0});

  std::istringstream out_of_range("r1, swa, 1.2\n");
  CHECK_THROWS_AS(read_scores(out_of_range), ParseError);
  std::istringstream dup("r1, swa, 0.2\nr1, swa, 0.3\n");
  CHECK_THROWS_AS(read_scores(dup), ParseError);
  std::istringstream bad("r1, swa\n");
  CHECK_THROWS_AS(read_scores(bad), ParseError);
  std::istringstream nan("r1, swa, high\n");
  CHECK_THROWS_AS(read_scores(nan), ParseError);
}

TEST_CASE("filter examples") {
  const std::vector<ScoredTranslation> s = {{"a", "swa", 0.9}, {"b", "swa", 0.66}, {"c", "swa", 0.65}, {"d", "swa", 0.2}};
  const auto sel = filter_translations(s, 0.65, 10);
  REQUIRE(sel.at("swa").size() == 2);
  CHECK(sel.at("swa")[0].record_id == "a");
  CHECK(filter_translations(s, 0.65, 1).at("swa").size() == 1);
  CHECK(filter_translations(s, 1.0, 10).empty());
  CHECK_THROWS_AS(filter_translations(s, 0.65, 0), std::invalid_argument);
  CHECK_THROWS_AS(filter_translations(s, 1.5, 3), std::invalid_argument);
}

TEST_CASE("filter agrees with the arg-max reference and ignores input order") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    auto scores = synthetic_scores(seed);
    for (std::size_t k : {1u, 15u, 50u}) {
      const auto want = oracle::select(scores, 0.65, k);
      CHECK(filter_translations(scores, 0.65, k) == want);
      std::shuffle(scores.begin(), scores.end(), std::mt19937(seed * 31 + static_cast<unsigned>(k)));
      CHECK(filter_translations(scores, 0.65, k) == want);
    }
  }
}

TEST_CASE("evaluation prompts") {
  const auto ids = eval_prompt_ids();
  CHECK(ids.size() == 3);
  for (const auto& id : ids) CHECK(render_eval_prompt(id, "What is 2+2?").find("What is 2+2?") != std::string::npos);
  CHECK_THROWS(render_eval_prompt("eval_z", "x"));
}
