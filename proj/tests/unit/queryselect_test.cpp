#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "sd/diag.hpp"
#include "sd/queryselect.hpp"
#include "sd/reasoner.hpp"

using namespace sd;

namespace {

SearchNode node_of(const CqpSpace& space, DiagnosisIds dplus) {
  return space.node_for_query(*space.canonical_query(dplus));
}

}  // namespace

TEST_CASE("traits and queries of the running example") {
  CqpSpace space(fixtures::ex1_diagnoses());
  auto p1 = node_of(space, {0});
  auto p3 = node_of(space, {1});
  CHECK(minimal_traits(p1) == std::vector<FormulaIds>{{2}});
  CHECK(minimal_traits(p3) == std::vector<FormulaIds>{{1}, {3}});
  CHECK(select_query(p1, {}) == FormulaIds{2});
  CHECK(select_query(p3, {}) == FormulaIds{1, 3});
  CHECK(all_minimal_queries(p1, 10) == std::vector<FormulaIds>{{2}});
  CHECK(all_minimal_queries(p3, 10) == std::vector<FormulaIds>{{1, 3}});

  auto p2 = node_of(space, {0, 1});
  CHECK(minimal_traits(p2) == std::vector<FormulaIds>{{3}});
}

TEST_CASE("plain hitting sets") {
  std::vector<FormulaIds> singletons{{1}, {2}, {3}};
  CHECK(minimal_hitting_sets(singletons, 10, {}) == std::vector<FormulaIds>{{1, 2, 3}});
  std::vector<FormulaIds> pair{{1, 2}};
  CHECK(minimal_hitting_sets(pair, 10, {}) == std::vector<FormulaIds>{{1}, {2}});
  CHECK(minimal_hitting_sets(pair, 1, {}).size() == 1);
  std::vector<FormulaIds> with_empty{{}};
  CHECK_THROWS(minimal_hitting_sets(with_empty, 10, {}));
}

TEST_CASE("criteria pick the cheapest minimal hitting set") {
  std::vector<FormulaIds> sets{{0, 1}, {0, 2}};
  Criterion card{};
  CHECK(minimal_hitting_sets(sets, 1, card)[0] == FormulaIds{0});

  Criterion sum{CriterionKind::MinSumProbability, {0.45, 0.1, 0.1}};
  CHECK(minimal_hitting_sets(sets, 1, sum)[0] == FormulaIds{1, 2});
  Criterion max{CriterionKind::MinMaxProbability, {0.45, 0.3, 0.2}};
  CHECK(minimal_hitting_sets(sets, 1, max)[0] == FormulaIds{1, 2});
  Criterion max2{CriterionKind::MinMaxProbability, {0.25, 0.3, 0.2}};
  CHECK(minimal_hitting_sets(sets, 1, max2)[0] == FormulaIds{0});
}

TEST_CASE("hitting sets agree with brute force") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 150; ++round) {
    std::vector<FormulaIds> sets;
    std::vector<oracle::Set> osets;
    for (int k = 1 + rng() % 5; k > 0; --k) {
      FormulaIds s;
      for (int j = 1 + rng() % 3; j > 0; --j) s.insert(rng() % 8);
      sets.push_back(s);
      osets.push_back(oracle::to_set(s));
    }
    std::vector<double> prob;
    for (int i = 0; i < 8; ++i) prob.push_back(0.01 + 0.48 * static_cast<double>(rng() % 1000) / 1000.0);
    auto expected = oracle::minimal_hitting_sets(osets);
    for (auto kind : {CriterionKind::MinCardinality, CriterionKind::MinSumProbability, CriterionKind::MinMaxProbability}) {
      Criterion c{kind, prob};
      auto got = oracle::to_sets(minimal_hitting_sets(sets, 1000, c));
      CAPTURE(round);
      std::sort(got.begin(), got.end());
      CHECK(got == expected);
      auto first = minimal_hitting_sets(sets, 1, c)[0];
      double best = 1e9;
      for (const auto& h : expected) best = std::min(best, c.cost(oracle::from_set(h)));
      CHECK(c.cost(first) == doctest::Approx(best));
    }
  }
}

TEST_CASE("minimal queries equal brute-force minimal QP-preserving subsets of the CQ") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto dpi = fixtures::corpus(seed);
    auto d = leading_diagnoses(dpi, 8, DiagnosisRank::MinCardinality);
    if (d.size() < 2) continue;
    auto ds = oracle::to_sets(d);
    CqpSpace space(d);
    for (const auto& q : space.enumerate_cqps()) {
      auto node = node_of(space, q.dplus);
      auto cq = node.cq->to_vector();
      if (cq.size() > 12) continue;
      auto target = oracle::from_qp(node.partition);
      auto expected = oracle::minimal_subsets(cq.size(), [&](const oracle::Set& pos) {
        if (pos.empty()) return false;
        oracle::Set ids;
        for (auto p : pos) ids.insert(cq[p]);
        return oracle::qpartition(oracle::kb_subset(dpi, ids), ds, dpi) == target;
      });
      std::vector<oracle::Set> expected_ids;
      for (const auto& pos : expected) {
        oracle::Set ids;
        for (auto p : pos) ids.insert(cq[p]);
        expected_ids.push_back(ids);
      }
      std::sort(expected_ids.begin(), expected_ids.end());
      reset_reasoner_stats();
      auto got = oracle::to_sets(all_minimal_queries(node, 100000));
      CHECK(reasoner_stats().calls() == 0);
      std::sort(got.begin(), got.end());
      CAPTURE(seed);
      CHECK(got == expected_ids);
    }
  }
}
