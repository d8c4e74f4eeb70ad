#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sd/diag.hpp"
#include "sd/dpi.hpp"
#include "sd/formula.hpp"
#include "sd/id_set.hpp"

namespace sd {

/// Query element; `kb_index` is set for formulas taken from K.
struct QueryFormula {
  Formula formula;
  std::optional<std::size_t> kb_index;
};

/// Decides whether a subset of a reference query Q' keeps Q''s q-partition.
/// Only dminus needs checking: every K*_i with D_i ∈ dplus entails Q' and
/// hence each of its subsets.
class QPPreservation {
 public:
  QPPreservation(std::span<const QueryFormula> reference, QPartition ref_qp, std::span<const Diagnosis> diagnoses,
                 const Dpi& dpi);

  /// Subset by positions in the reference query.
  bool preserves(const PositionIds& subset);
  /// Subset by formula; throws std::invalid_argument if some formula is not in Q'.
  bool preserves(std::span<const Formula> subset);

  std::size_t calls() const { return calls_; }
  std::span<const QueryFormula> reference() const { return reference_; }

 private:
  std::vector<QueryFormula> reference_;
  QPartition ref_qp_;
  std::vector<std::vector<Formula>> dminus_kbs_;
  const Dpi& dpi_;
  std::size_t calls_ = 0;
};

/// ⊆-minimal q-partition-preserving subset of `order` (positions into the
/// reference query), keeping earlier positions in preference.
PositionIds min_q(std::span<const std::size_t> order, QPPreservation& check);

struct OptimizeResult {
  std::vector<QueryFormula> query;  // Q*
  std::size_t preservation_calls = 0;
};

/// minQ over [Q_impl, Q ascending by fault probability (ties by KB index)].
OptimizeResult optimize_query(std::span<const QueryFormula> query, std::span<const Formula> implicit,
                              const QPartition& ref_qp, std::span<const Diagnosis> diagnoses, const Dpi& dpi);

}  // namespace sd
