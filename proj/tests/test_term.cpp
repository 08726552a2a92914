#include <doctest.h>

#include <random>

#include "vocabx/error.hpp"
#include "vocabx/term.hpp"

using vocabx::normalize_term;

TEST_CASE("normalize_term examples") {
  CHECK(normalize_term("Smart Cities") == "smart_cities");
  CHECK(normalize_term("energy") == "energy");
  CHECK(normalize_term("  Smart   Home ") == "smart_home");
  CHECK(normalize_term("a\tb\nc") == "a_b_c");
}

TEST_CASE("normalize_term rejects blank input") {
  for (const char* raw : {"", "   ", "\t\n"}) {
    try {
      normalize_term(raw);
      FAIL("expected invalid_term");
    } catch (const vocabx::Error& e) {
      CHECK(e.code() == vocabx::ErrorCode::kInvalidTerm);
    }
  }
}

TEST_CASE("normalize_term is idempotent on random strings") {
  std::mt19937 rng(7);
  const std::string alphabet = "aBc Z_\t-9 \xc3\xa9";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 20);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (int j = len(rng); j > 0; --j) s.push_back(alphabet[pick(rng)]);
    std::string once;
    try {
      once = normalize_term(s);
    } catch (const vocabx::Error&) {
      continue;
    }
    CHECK(normalize_term(once) == once);
    CHECK(once.find(' ') == std::string::npos);
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("display helpers") {
  CHECK(vocabx::display_form("  Smart   Cities ") == "Smart Cities");
  CHECK(vocabx::display_from_key("smart_cities") == "smart cities");
}
