#pragma once

#include <span>
#include <vector>

#include "sd/diag.hpp"
#include "sd/dpi.hpp"
#include "sd/formula.hpp"
#include "sd/reasoner.hpp"

namespace sd {

struct EnrichResult {
  std::vector<Formula> implicit;  // Q_impl in generation order
  ReasonerStats reasoner;         // ent_t_calls is 2 per call
};

/// Q_impl = [Ent_T(S ∪ Q) \ Ent_T(S)] \ Q with S = (K \ U_D) ∪ B ∪ U_P.
/// Formulas already in K ∪ B ∪ U_P (after normalization) are dropped.
EnrichResult enrich_query(std::span<const Formula> query, std::span<const Diagnosis> diagnoses, const Dpi& dpi);

}  // namespace sd
