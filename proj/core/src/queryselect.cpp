#include "sd/queryselect.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace sd {

double Criterion::cost(const FormulaIds& h) const {
  switch (kind) {
    case CriterionKind::MinCardinality:
      return static_cast<double>(h.size());
    case CriterionKind::MinSumProbability: {
      double s = 0;
      h.for_each([&](std::size_t i) { s += prob.at(i); });
      return s;
    }
    case CriterionKind::MinMaxProbability: {
      double m = 0;
      h.for_each([&](std::size_t i) { m = std::max(m, prob.at(i)); });
      return m;
    }
  }
  return 0;
}

std::vector<FormulaIds> minimal_traits(const SearchNode& node) {
  std::vector<FormulaIds> out;
  for (const auto& [id, trait] : node.traits) {
    if (std::find(out.begin(), out.end(), trait) != out.end()) continue;
    bool minimal = std::none_of(node.traits.begin(), node.traits.end(),
                                [&](const auto& other) { return other.second.is_proper_subset_of(trait); });
    if (minimal) out.push_back(trait);
  }
  return out;
}

namespace {

struct Open {
  double cost;
  FormulaIds path;
};

struct OpenOrder {
  bool operator()(const Open& a, const Open& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return lex_less(a.path, b.path);
  }
};

bool hits_all(const FormulaIds& h, std::span<const FormulaIds> sets) {
  return std::all_of(sets.begin(), sets.end(), [&](const FormulaIds& s) { return s.intersects(h); });
}

}  // namespace

// The labels are given up front, so no node ever consults a reasoner.
// Costs are monotone under path extension, which with the (cost, size, lex)
// order makes the first hitting set popped a minimal one of least cost.
std::vector<FormulaIds> minimal_hitting_sets(std::span<const FormulaIds> sets, std::size_t limit,
                                             const Criterion& crit, HittingSetStats* stats) {
  HittingSetStats local;
  HittingSetStats& st = stats ? *stats : local;
  std::vector<FormulaIds> found;
  if (limit == 0) return found;
  if (sets.empty()) return found;
  for (const auto& s : sets)
    if (s.empty()) throw std::invalid_argument("cannot hit an empty set");

  std::set<Open, OpenOrder> open{Open{0.0, FormulaIds{}}};
  std::unordered_set<FormulaIds, IdSetHash> generated{FormulaIds{}};
  st.generated = 1;

  while (!open.empty() && found.size() < limit) {
    Open node = *open.begin();
    open.erase(open.begin());
    if (std::any_of(found.begin(), found.end(), [&](const FormulaIds& h) { return h.is_subset_of(node.path); }))
      continue;
    ++st.expanded;

    auto unhit = std::find_if(sets.begin(), sets.end(), [&](const FormulaIds& s) { return !s.intersects(node.path); });
    if (unhit == sets.end()) {
      bool minimal = true;
      node.path.for_each([&](std::size_t e) {
        FormulaIds smaller = node.path;
        smaller.erase(e);
        if (minimal && hits_all(smaller, sets)) minimal = false;
      });
      if (minimal) found.push_back(node.path);
      continue;
    }
    unhit->for_each([&](std::size_t e) {
      FormulaIds child = node.path;
      child.insert(e);
      if (!generated.insert(child).second) return;
      ++st.generated;
      open.insert(Open{crit.cost(child), std::move(child)});
    });
  }
  return found;
}

FormulaIds select_query(const SearchNode& node, const Criterion& crit, HittingSetStats* stats) {
  if (node.is_initial()) throw std::invalid_argument("query selection needs a canonical q-partition");
  auto traits = minimal_traits(node);
  auto hs = minimal_hitting_sets(traits, 1, crit, stats);
  if (hs.empty()) throw std::logic_error("canonical q-partition without traits");
  return hs.front();
}

std::vector<FormulaIds> all_minimal_queries(const SearchNode& node, std::size_t limit, const Criterion& crit) {
  if (node.is_initial()) throw std::invalid_argument("query selection needs a canonical q-partition");
  auto traits = minimal_traits(node);
  return minimal_hitting_sets(traits, limit, crit);
}

}  // namespace sd
