#include <doctest.h>

#include "mwploc/hashing.hpp"
#include "mwploc/log.hpp"
#include "mwploc/prompts.hpp"
#include "mwploc/text.hpp"
#include "support.hpp"

using namespace mwploc;

TEST_CASE("code point length and round trip") {
  CHECK(text::length("abc") == 3);
  CHECK(text::length("Zoë") == 3);
  CHECK(text::length("") == 0);
  const std::string s = "Dhs ₦ 5 € ŋ";
  CHECK(text::encode(text::decode(s)) == s);
}

TEST_CASE("ill-formed UTF-8 becomes replacement characters") {
  const auto cps = text::decode(std::string("a\xff" "b"));
  REQUIRE(cps.size() == 3);
  CHECK(cps[1] == U'�');
}

TEST_CASE("letters, folding and boundaries") {
  CHECK(text::is_letter(U'a'));
  CHECK(text::is_letter(U'ŋ'));
  CHECK_FALSE(text::is_letter(U'1'));
  CHECK_FALSE(text::is_letter(U'$'));
  CHECK(text::fold(U'A') == U'a');
  CHECK(text::iequals("MANDY", "mandy"));
  CHECK(text::icontains("Give it to BENEDICT.", "benedict"));

  CHECK(text::contains_at_boundary("Ann owes Bob", "ann"));
  CHECK_FALSE(text::contains_at_boundary("Annabel owes Bob", "Ann"));
  CHECK_FALSE(text::contains_at_boundary("Joann owes Bob", "ann"));
  CHECK(text::contains_at_boundary("Ann's book", "Ann"));
  CHECK(text::contains_at_boundary("pay $5", "$"));
  CHECK(text::contains_at_boundary("Bob2 pays", "Bob"));
}

TEST_CASE("find_at_boundaries does not overlap") {
  const auto cps = text::index("aa aa aaa");
  const auto hits = text::find_at_boundaries(cps, U"aa");
  CHECK(hits == std::vector<std::size_t>{0, 3});
}

TEST_CASE("trim removes surrounding whitespace only") {
  CHECK(text::trim("  106 \n") == "106");
  CHECK(text::trim("a b") == "a b");
  CHECK(text::trim("   ").empty());
}

TEST_CASE("stable hash is fixed across runs") {
  // FNV-1a of "" is the offset basis; the finaliser must be deterministic.
  CHECK(hashing::stable_hash("") == hashing::stable_hash(""));
  CHECK(hashing::stable_hash("a") != hashing::stable_hash("b"));
  CHECK(hashing::stable_hash_fields(std::string("a"), std::string("bc")) !=
        hashing::stable_hash_fields(std::string("ab"), std::string("c")));
  CHECK(hashing::to_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("sha256 matches known digests") {
  CHECK(hashing::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hashing::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("log scrubs registered secrets") {
  std::vector<std::string> seen;
  log::set_sink([&](log::Level, std::string_view m) { seen.emplace_back(m); });
  log::register_secret("sk-test-SECRET123");
  log::warning("request failed with key sk-test-SECRET123 attached");
  log::reset_sink();
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].find("SECRET123") == std::string::npos);
  CHECK(log::scrub("x sk-test-SECRET123 y").find("sk-test") == std::string::npos);
}

TEST_CASE("prompt rendering") {
  CHECK(prompts::render("Hi {name}!", {{"name", "Amani"}}) == "Hi Amani!");
  CHECK(prompts::render("{\"a\": 1} {x}", {{"x", "{y}"}}) == "{\"a\": 1} {y}");
  CHECK_THROWS_AS(prompts::render("{missing}", {}), Error);
  CHECK_THROWS_AS(prompts::asset("no_such_template"), Error);

  const auto names = prompts::asset_names();
  for (const char* n : {"oneshot_v1", "oneshot_context_v1", "direct_v1", "extract_v1", "extract_repair_v1",
                        "eval_a_v1", "eval_b_v1", "eval_c_v1"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
}
