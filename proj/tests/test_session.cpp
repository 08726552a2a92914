#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracle.hpp"
#include "vocabx/error.hpp"
#include "vocabx/session.hpp"

using testutil::make_model;
using testutil::error_of;
using vocabx::ErrorCode;
using vocabx::Session;
using vocabx::SessionParams;

namespace {

SessionParams fixture_params() {
  SessionParams p;
  p.model_ids = {"a", "b"};
  return p;
}

std::vector<std::string> keys(const std::vector<vocabx::TermRecord>& recs) {
  std::vector<std::string> out;
  for (const auto& r : recs) out.push_back(r.term);
  return out;
}

void check_against_oracle(const Session& s, const oracle::FixturePair& fx) {
  const auto acc = keys(s.accepted());
  const auto rej = keys(s.rejected());
  std::set<std::string> got;
  for (const auto& [term, sug] : s.suggestions()) {
    got.insert(term);
    CHECK(std::abs(sug.score - oracle::raw_score(fx.raws(), term, acc, rej, s.params().lambda)) <= 1e-6);
    CHECK(sug.below_threshold == (sug.score < s.params().display_threshold));
  }
  CHECK(got == oracle::brute_suggestion_terms(s.ensemble(), acc, rej, s.params().k));
}

}  // namespace

TEST_CASE("new_session") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  CHECK(s.accepted().empty());
  CHECK(s.rejected().empty());
  CHECK(s.suggestions().empty());
  CHECK(s.params().lambda == 0.5);
  CHECK(s.params().per_anchor_display == 3);
  CHECK(s.params().k == 10);
  CHECK(s.id() != vocabx::new_session(fixture_params(), *fx.registry).id());

  SessionParams bad = fixture_params();
  bad.model_ids = {"nope"};
  CHECK(error_of([&] { vocabx::new_session(bad, *fx.registry); }) == ErrorCode::kUnknownModel);
  bad = fixture_params();
  bad.k = 0;
  CHECK(error_of([&] { vocabx::new_session(bad, *fx.registry); }) == ErrorCode::kInvalidParams);
  bad = fixture_params();
  bad.lambda = -1;
  CHECK(error_of([&] { vocabx::new_session(bad, *fx.registry); }) == ErrorCode::kInvalidParams);
}

TEST_CASE("first accepted seed scores suggestions by P to the seed") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.accept("Term_005");
  REQUIRE(s.accepted().size() == 1);
  CHECK(s.accepted()[0].term == "term_005");
  CHECK(s.accepted()[0].display == "Term_005");
  CHECK_FALSE(s.suggestions().empty());
  CHECK_FALSE(s.is_suggested("term_005"));
  for (const auto& [term, sug] : s.suggestions()) {
    CHECK(sug.score == *s.ensemble().similarity(term, "term_005"));
    CHECK(sug.anchor == "term_005");
  }
  check_against_oracle(s, fx);

  auto before = s.suggestions();
  s.accept("term_005");  // no-op
  CHECK(s.suggestions() == before);
}

TEST_CASE("accepting an out-of-vocabulary term adds no suggestions") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.accept("term_005");
  auto before = s.suggestions();
  s.accept("no such thing");
  CHECK(s.is_accepted("no_such_thing"));
  REQUIRE(s.suggestions().size() == before.size());
  for (const auto& [term, sug] : s.suggestions()) {
    CHECK(sug.score == before.at(term).score);
    CHECK(sug.anchor == before.at(term).anchor);
  }
}

TEST_CASE("two seeds: scores equal raw-file P sums") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.accept("term_005");
  s.accept("term_025");
  check_against_oracle(s, fx);
  for (const auto& [term, sug] : s.suggestions()) {
    const double pa = *oracle::raw_p(fx.raws(), term, "term_005");
    const double pb = *oracle::raw_p(fx.raws(), term, "term_025");
    CHECK(std::abs(sug.score - (pa + pb)) <= 1e-6);
  }
}

TEST_CASE("rejection subtracts lambda times P") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.accept("term_005");
  s.accept("term_006");
  const auto before = s.suggestions();
  const std::string r = s.ranked_suggestions()[2].term;
  s.reject(r);
  CHECK(s.is_rejected(r));
  CHECK_FALSE(s.is_suggested(r));
  for (const auto& [term, sug] : s.suggestions()) {
    auto old = before.find(term);
    if (old == before.end()) continue;
    auto p = s.ensemble().similarity(term, r);
    REQUIRE(p.has_value());
    CHECK(std::abs((sug.score - old->second.score) - (-0.5 * *p)) <= 1e-12);
  }
  s.reject(s.ranked_suggestions()[0].term);
  check_against_oracle(s, fx);
}

TEST_CASE("lambda zero makes rejection score-neutral") {
  oracle::FixturePair fx;
  SessionParams p = fixture_params();
  p.lambda = 0.0;
  Session s = vocabx::new_session(p, *fx.registry);
  s.accept("term_100");
  const auto before = s.suggestions();
  s.reject(s.ranked_suggestions()[1].term);
  s.reject("term_999");
  for (const auto& [term, sug] : s.suggestions()) {
    if (before.count(term)) CHECK(sug.score == before.at(term).score);
  }
}

TEST_CASE("reject of an accepted term is a conflict") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.accept("term_001");
  CHECK(error_of([&] { s.reject("term_001"); }) == ErrorCode::kConflict);
  CHECK(s.is_accepted("term_001"));
  CHECK(error_of([&] { s.accept("   "); }) == ErrorCode::kInvalidTerm);
}

TEST_CASE("re-accepting a rejected term moves it") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.reject("term_001");
  s.accept("term_001");
  CHECK(s.is_accepted("term_001"));
  CHECK_FALSE(s.is_rejected("term_001"));
  // Undoing the accept restores the earlier rejection.
  s.remove_accepted("term_001");
  CHECK(s.is_rejected("term_001"));
}

TEST_CASE("remove_accepted") {
  oracle::FixturePair fx;
  SUBCASE("full undo") {
    Session s = vocabx::new_session(fixture_params(), *fx.registry);
    s.accept("term_003");
    s.remove_accepted("term_003");
    CHECK(s.accepted().empty());
    CHECK(s.suggestions().empty());
  }
  SUBCASE("equivalent to never accepting") {
    Session s = vocabx::new_session(fixture_params(), *fx.registry);
    s.accept("term_003");
    s.accept("term_044");
    s.remove_accepted("term_044");
    Session only = vocabx::new_session(fixture_params(), *fx.registry);
    only.accept("term_003");
    CHECK(s.suggestions() == only.suggestions());
    CHECK(s.accepted() == only.accepted());
  }
  SUBCASE("unknown term") {
    Session s = vocabx::new_session(fixture_params(), *fx.registry);
    CHECK(error_of([&] { s.remove_accepted("term_003"); }) == ErrorCode::kNotAccepted);
  }
}

TEST_CASE("ranking and ties") {
  // b and c are symmetric around q, so their scores tie exactly.
  auto m = make_model("m", 2, {{"q", {1, 0}}, {"c", {1, -1}}, {"b", {1, 1}}, {"far", {-1, 0.2f}}});
  vocabx::ModelRegistry reg;
  reg.add(m);
  SessionParams p;
  p.model_ids = {"m"};
  Session s = vocabx::new_session(p, reg);
  CHECK(s.ranked_suggestions().empty());
  s.accept("q");
  auto ranked = s.ranked_suggestions();
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].term == "b");
  CHECK(ranked[1].term == "c");
  CHECK(ranked[0].score == ranked[1].score);
  CHECK(ranked[2].term == "far");
  CHECK(ranked[2].below_threshold);
}

TEST_CASE("list_view truncation and threshold boundary") {
  testutil::Rows rows{{"q", {1, 0}}};
  // cosines to q: 0.9, 0.8, 0.7, 0.6, 0.29
  for (auto [name, c] : std::vector<std::pair<std::string, float>>{
           {"s1", 0.9f}, {"s2", 0.8f}, {"s3", 0.7f}, {"s4", 0.6f}, {"s5", 0.29f}}) {
    rows.push_back({name, {c, std::sqrt(1 - c * c)}});
  }
  vocabx::ModelRegistry reg;
  reg.add(make_model("m", 2, rows));
  SessionParams p;
  p.model_ids = {"m"};
  Session s = vocabx::new_session(p, reg);
  s.accept("q");
  auto groups = s.list_view();
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].anchor.term == "q");
  REQUIRE(groups[0].suggestions.size() == 3);
  CHECK(groups[0].suggestions[0].term == "s1");
  CHECK(s.suggestions().at("s5").below_threshold);
  CHECK_FALSE(s.suggestions().at("s4").below_threshold);

  // Strict less-than: a score equal to the threshold is not dimmed.
  const double s3 = s.suggestions().at("s3").score;
  p.display_threshold = s3;
  Session at = vocabx::new_session(p, reg);
  at.accept("q");
  CHECK_FALSE(at.suggestions().at("s3").below_threshold);
  p.display_threshold = std::nextafter(s3, 2.0);
  Session above = vocabx::new_session(p, reg);
  above.accept("q");
  CHECK(above.suggestions().at("s3").below_threshold);

  p.per_anchor_display = 5;
  Session wide = vocabx::new_session(p, reg);
  wide.accept("q");
  CHECK(wide.list_view()[0].suggestions.size() == 5);
}

TEST_CASE("anchors follow the highest P with lexicographic ties") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  for (auto t : {"term_001", "term_002", "term_021", "term_500"}) s.accept(t);
  for (const auto& [term, sug] : s.suggestions()) {
    double best = -2;
    std::string arg;
    for (const auto& a : s.accepted()) {
      double p = s.ensemble().similarity(term, a.term).value_or(0.0);
      if (p > best || (p == best && a.term < arg)) {
        best = p;
        arg = a.term;
      }
    }
    CHECK(sug.anchor == arg);
  }
  for (const auto& g : s.list_view()) {
    for (const auto& sug : g.suggestions) CHECK(sug.anchor == g.anchor.term);
  }
}

TEST_CASE("graph_view") {
  oracle::FixturePair fx;
  Session s = vocabx::new_session(fixture_params(), *fx.registry);
  s.accept("term_001");
  auto g = s.graph_view();
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());

  Session oov = vocabx::new_session(fixture_params(), *fx.registry);
  oov.accept("alpha");
  oov.accept("beta");
  CHECK(oov.graph_view().nodes.size() == 2);
  CHECK(oov.graph_view().edges.empty());

  for (int i = 0; i < 12; ++i) s.accept(oracle::fixture_term(i * 7 + 2));
  g = s.graph_view();
  CHECK(g.nodes == s.accepted());
  std::set<std::pair<std::string, std::string>> expect;
  for (const auto& x : s.accepted()) {
    for (const auto& y : s.accepted()) {
      if (x.term >= y.term) continue;
      auto p = oracle::raw_p(fx.raws(), x.term, y.term);
      if (p && *p >= 0.25) expect.insert({x.term, y.term});
    }
  }
  std::set<std::pair<std::string, std::string>> got;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    CHECK(e.a < e.b);
    CHECK(e.weight >= 0.25);
    if (i > 0) CHECK(std::make_pair(g.edges[i - 1].a, g.edges[i - 1].b) < std::make_pair(e.a, e.b));
    got.insert({e.a, e.b});
  }
  CHECK(got == expect);
}

TEST_CASE("permuted accept orders give identical suggestions") {
  oracle::FixturePair fx;
  std::vector<std::string> seeds{"term_004", "term_024", "term_311", "term_777"};
  Session base = vocabx::new_session(fixture_params(), *fx.registry);
  for (const auto& t : seeds) base.accept(t);
  std::sort(seeds.begin(), seeds.end());
  do {
    Session s = vocabx::new_session(fixture_params(), *fx.registry);
    for (const auto& t : seeds) s.accept(t);
    CHECK(s.suggestions() == base.suggestions());
  } while (std::next_permutation(seeds.begin(), seeds.end()));
}
