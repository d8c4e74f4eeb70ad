#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sd/diag.hpp"
#include "sd/dpi.hpp"
#include "sd/id_set.hpp"

namespace sd {

/// Discrimination formulas: the union of the diagnoses minus their intersection.
FormulaIds discrimination_formulas(std::span<const Diagnosis> diagnoses);

/// State of the q-partition search. Apart from the initial state every node
/// is a canonical q-partition with empty dzero.
struct SearchNode {
  QPartition partition;
  std::optional<FormulaIds> cq;  // absent only for the initial state
  FormulaIds dplus_union;
  std::vector<std::pair<std::size_t, FormulaIds>> traits;  // dminus member -> D_i \ U_dplus, by id

  bool is_initial() const { return !cq.has_value(); }
};

/// Set-level view of the leading diagnoses. Everything here is pure set
/// algebra; no reasoner is involved.
class CqpSpace {
 public:
  explicit CqpSpace(std::vector<Diagnosis> diagnoses);

  std::span<const Diagnosis> diagnoses() const { return diagnoses_; }
  std::size_t size() const { return diagnoses_.size(); }
  const FormulaIds& discrimination() const { return disc_; }

  /// (K \ U_dplus) ∩ Disc_D; nullopt when that set is empty.
  std::optional<FormulaIds> canonical_query(const DiagnosisIds& dplus) const;

  /// The canonical q-partition of a defined CQ: D_i ∈ dplus iff D_i ∩ CQ = ∅.
  SearchNode node_for_query(const FormulaIds& cq) const;

  SearchNode initial() const;
  std::vector<SearchNode> expand(const SearchNode& node) const;

  /// Brute force over all seeds; guarded to 15 diagnoses.
  std::vector<QPartition> enumerate_cqps() const;

 private:
  SearchNode make_node(DiagnosisIds dplus) const;

  std::vector<Diagnosis> diagnoses_;
  FormulaIds union_;
  FormulaIds disc_;
};

enum class MeasureKind { Entropy, SplitInHalf };

struct Measure {
  MeasureKind kind = MeasureKind::Entropy;
  double threshold = 0.05;

  static Measure entropy(double t = 0.05) { return {MeasureKind::Entropy, t}; }
  static Measure split_in_half(double t = 0.0) { return {MeasureKind::SplitInHalf, t}; }
};

class UnnormalizedProbabilities : public std::invalid_argument {
 public:
  UnnormalizedProbabilities() : std::invalid_argument("diagnosis probabilities must sum to 1") {}
};

/// Lower is better for both measures.
double evaluate_measure(const Measure& m, const QPartition& partition, std::span<const double> probs);

/// Per-instance lower bound on the measure: 0 for ENT, |D| mod 2 for SPL.
double measure_optimum_bound(const Measure& m, std::size_t diagnoses);

constexpr std::size_t kDefaultNodeBudget = 10000;

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t pruned = 0;
};

struct SearchResult {
  SearchNode node;
  double value = 0;
  bool goal_reached = false;
  bool budget_exhausted = false;
  SearchStats stats;
};

/// Depth-first, local best-first backtracking search over canonical
/// q-partitions. Returns the first goal (value ≤ bound + threshold) or the
/// best node seen when the space or the budget runs out.
SearchResult find_qpartition(const CqpSpace& space, std::span<const double> probs, const Measure& m,
                             std::size_t node_budget = kDefaultNodeBudget);

}  // namespace sd
