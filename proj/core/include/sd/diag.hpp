#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sd/dpi.hpp"
#include "sd/id_set.hpp"

namespace sd {

/// Subset of K, as indices into the KB.
using Diagnosis = FormulaIds;
using ConflictSet = FormulaIds;

/// QuickXPlain over the candidate order; earlier candidates are preferred.
std::optional<ConflictSet> minimal_conflict(std::span<const std::size_t> candidates, const Dpi& dpi);

enum class DiagnosisRank { MinCardinality, MaxProbability };

struct HsTreeStats {
  std::size_t nodes_expanded = 0;
  std::size_t nodes_generated = 0;
  std::size_t conflicts_computed = 0;
  std::size_t labels_reused = 0;
};

/// Up to `n` minimal diagnoses in rank order, found by uniform-cost HS-Tree
/// over minimal conflicts. Returns {∅} when K itself is not faulty.
std::vector<Diagnosis> leading_diagnoses(const Dpi& dpi, std::size_t n, DiagnosisRank rank,
                                         HsTreeStats* stats = nullptr);

/// p(D) ∝ Π_{φ∈D} p(φ) · Π_{φ∈K\D} (1 − p(φ)), normalized over `diagnoses`.
std::vector<double> diagnosis_priors(std::span<const Diagnosis> diagnoses, const Dpi& dpi);

constexpr std::size_t kBruteForceLimit = 20;

/// Subset enumeration; throws std::length_error when |K| exceeds the limit.
std::vector<Diagnosis> brute_force_diagnoses(const Dpi& dpi);
std::vector<ConflictSet> brute_force_conflicts(const Dpi& dpi);

}  // namespace sd
