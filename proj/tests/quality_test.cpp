#include <doctest.h>

#include <random>

#include "mwploc/quality.hpp"
#include "mwploc/text.hpp"
#include "oracles/similarity_oracle.hpp"
#include "support.hpp"

using namespace mwploc;

namespace {

replace::ReplacementDict golden_dict() {
  replace::ReplacementDict d;
  d.entries = {{"Benedict", "Julani", replace::EntryKind::person},
               {"dollars", "shilingi", replace::EntryKind::currency_word},
               {"dollar", "shilingi", replace::EntryKind::currency_word},
               {"Mandy", "Camari", replace::EntryKind::person},
               {"$", "shilingi", replace::EntryKind::currency_symbol}};
  return d;
}

}  // namespace

TEST_CASE("similarity of known pairs") {
  CHECK(quality::similarity_ratio(std::string_view("abcd"), std::string_view("bcde")) == doctest::Approx(0.75));
  CHECK(quality::similarity_ratio(std::string_view(""), std::string_view("")) == 1.0);
  CHECK(quality::similarity_ratio(std::string_view("abc"), std::string_view("")) == 0.0);
  CHECK(quality::similarity_ratio(std::string_view("same"), std::string_view("same")) == 1.0);
  // Code points, not bytes.
  CHECK(quality::similarity_ratio(std::string_view("ñ"), std::string_view("n")) == 0.0);
  CHECK(quality::matching_characters(U"ñab", U"ñxb") == 2);
}

TEST_CASE("similarity matches the exhaustive reference") {
  std::mt19937 rng(20240917);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> alpha(0, 3);
  for (int n = 0; n < 300; ++n) {
    std::u32string a, b;
    const int la = len(rng), lb = len(rng);
    for (int i = 0; i < la; ++i) a.push_back(U'a' + alpha(rng));
    for (int i = 0; i < lb; ++i) b.push_back(U'a' + alpha(rng));
    CHECK(quality::matching_characters(a, b) == oracle::brute_matching(a, b));
    CHECK(quality::similarity_ratio(a, b) == oracle::brute_ratio(a, b));
  }
}

TEST_CASE("golden output passes every gate") {
  const localize::LocalizationConfig cfg;
  const auto rep = quality::run_quality_checks(testing::kLoc, testing::kTrans, golden_dict(), cfg);
  CHECK(rep.passed);
  CHECK(rep.length_ratio == doctest::Approx(1.0));
  CHECK(rep.similarity == oracle::brute_ratio(text::decode(testing::kLoc), text::decode(testing::kTrans)));
  CHECK(rep.similarity > 0.8);
  CHECK_FALSE(quality::failure_reason(rep).has_value());
  CHECK_NOTHROW(quality::validate(rep));
}

TEST_CASE("retained source entity fails first") {
  const localize::LocalizationConfig cfg;
  std::string bad = testing::kLoc;
  bad.replace(bad.find("Camari"), 6, "Mandy");
  const auto rep = quality::run_quality_checks(bad, testing::kTrans, golden_dict(), cfg);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.key_entities_absent);
  CHECK(rep.offending == std::vector<std::string>{"Mandy"});
  CHECK(quality::failure_reason(rep)->rfind("key_entity_present:", 0) == 0);
}

TEST_CASE("missing replacement target") {
  const localize::LocalizationConfig cfg;
  std::string bad = testing::kLoc;
  for (auto pos = bad.find("Camari"); pos != std::string::npos; pos = bad.find("Camari")) bad.replace(pos, 6, "Amina");
  const auto rep = quality::run_quality_checks(bad, testing::kTrans, golden_dict(), cfg);
  CHECK_FALSE(rep.replacements_present);
  CHECK(rep.missing == std::vector<std::string>{"Camari"});
  CHECK(quality::failure_reason(rep)->rfind("replacement_missing:", 0) == 0);
}

TEST_CASE("length band edges") {
  localize::LocalizationConfig cfg;
  const auto doubled = testing::kLoc + " " + testing::kLoc;
  const auto rep = quality::run_quality_checks(doubled, testing::kTrans, golden_dict(), cfg);
  CHECK_FALSE(rep.length_ok);
  CHECK(quality::failure_reason(rep)->rfind("length_out_of_band:", 0) == 0);

  // No dictionary: ratio is len(x_hat)/len(x_trans).
  replace::ReplacementDict empty;
  const std::string trans(100, 'x');
  CHECK(quality::run_quality_checks(std::string(70, 'x'), trans, empty, cfg).length_ok);
  CHECK_FALSE(quality::run_quality_checks(std::string(69, 'x'), trans, empty, cfg).length_ok);
  CHECK(quality::run_quality_checks(std::string(143, 'x'), trans, empty, cfg).length_ok);
  CHECK_FALSE(quality::run_quality_checks(std::string(144, 'x'), trans, empty, cfg).length_ok);
}

TEST_CASE("similarity threshold is strict") {
  localize::LocalizationConfig cfg;
  replace::ReplacementDict empty;
  // 8 of 10 characters shared: ratio exactly 0.8.
  const auto rep = quality::run_quality_checks("aaaaaaaabb", "aaaaaaaacc", empty, cfg);
  CHECK(rep.similarity == doctest::Approx(0.8));
  CHECK_FALSE(rep.similarity_ok);
  CHECK(*quality::failure_reason(rep) == "similarity_below_threshold: 0.8000");
}

TEST_CASE("inconsistent report is rejected") {
  quality::QualityReport r;
  r.passed = true;
  CHECK_THROWS_AS(quality::validate(r), ValidationError);
}
