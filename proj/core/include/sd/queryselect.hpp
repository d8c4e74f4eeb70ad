#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sd/id_set.hpp"
#include "sd/qpsearch.hpp"

namespace sd {

enum class CriterionKind { MinCardinality, MinSumProbability, MinMaxProbability };

/// Secondary query quality criterion; `prob` holds per-formula fault
/// probabilities for the probability-based kinds.
struct Criterion {
  CriterionKind kind = CriterionKind::MinCardinality;
  std::vector<double> prob;

  double cost(const FormulaIds& h) const;
};

/// ⊆-minimal traits of a canonical q-partition, deduplicated, in order of
/// the lowest dminus member carrying them.
std::vector<FormulaIds> minimal_traits(const SearchNode& node);

struct HittingSetStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

/// Cheapest minimal hitting set of the minimal traits under `crit`.
FormulaIds select_query(const SearchNode& node, const Criterion& crit, HittingSetStats* stats = nullptr);

/// Minimal hitting sets of the minimal traits in cost order, at most `limit`.
std::vector<FormulaIds> all_minimal_queries(const SearchNode& node, std::size_t limit,
                                            const Criterion& crit = {});

/// Uniform-cost HS-Tree over explicitly given sets.
std::vector<FormulaIds> minimal_hitting_sets(std::span<const FormulaIds> sets, std::size_t limit,
                                             const Criterion& crit, HittingSetStats* stats = nullptr);

}  // namespace sd
