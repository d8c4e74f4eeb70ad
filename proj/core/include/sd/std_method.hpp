#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sd/diag.hpp"
#include "sd/dpi.hpp"
#include "sd/qpsearch.hpp"
#include "sd/reasoner.hpp"

namespace sd {

struct StdMethodResult {
  std::optional<std::vector<Formula>> query;  // nullopt: no query found
  QPartition partition;
  double value = 0;
  std::size_t seeds_considered = 0;
  ReasonerStats reasoner;
  double elapsed_ms = 0;
};

/// Reasoner-driven baseline: for a random `fraction` of the seeds D+ ⊂ D,
/// take the common (explicit and Ent_T) entailments of the seed's solution
/// KBs, classify the other diagnoses with the reasoner, keep the best query
/// under `m` and minimize it while preserving its q-partition.
StdMethodResult std_method_query(std::span<const Diagnosis> diagnoses, std::span<const double> probs,
                                 const Dpi& dpi, const Measure& m, double fraction, std::uint64_t seed);

}  // namespace sd
