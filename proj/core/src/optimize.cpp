#include "sd/optimize.hpp"

#include <algorithm>

#include "sd/quickxplain.hpp"
#include "sd/reasoner.hpp"

namespace sd {

QPPreservation::QPPreservation(std::span<const QueryFormula> reference, QPartition ref_qp,
                               std::span<const Diagnosis> diagnoses, const Dpi& dpi)
    : reference_(reference.begin(), reference.end()), ref_qp_(std::move(ref_qp)), dpi_(dpi) {
  ref_qp_.dminus.for_each([&](std::size_t i) { dminus_kbs_.push_back(solution_kb(diagnoses[i], dpi)); });
}

bool QPPreservation::preserves(const PositionIds& subset) {
  ++calls_;
  if (subset.empty()) return false;
  std::vector<Formula> x;
  subset.for_each([&](std::size_t p) { x.push_back(reference_.at(p).formula); });
  for (const auto& kb : dminus_kbs_) {
    Reasoner r(kb);
    r.add(x);
    if (!r.consistent()) continue;
    bool refuted = false;
    for (const auto& n : dpi_.negative()) {
      if (r.entails(n.formulas)) {
        refuted = true;
        break;
      }
    }
    if (!refuted) return false;
  }
  return true;
}

bool QPPreservation::preserves(std::span<const Formula> subset) {
  PositionIds positions;
  for (const auto& f : subset) {
    auto it = std::find_if(reference_.begin(), reference_.end(), [&](const QueryFormula& q) { return q.formula == f; });
    if (it == reference_.end()) throw std::invalid_argument("formula is not part of the reference query");
    positions.insert(static_cast<std::size_t>(it - reference_.begin()));
  }
  return preserves(positions);
}

PositionIds min_q(std::span<const std::size_t> order, QPPreservation& check) {
  auto holds = [&](const std::vector<std::size_t>& xs) { return check.preserves(PositionIds::from(xs)); };
  auto result = quick_xplain(order, holds);
  if (!result) throw std::invalid_argument("input to minQ does not preserve the q-partition");
  return PositionIds::from(*result);
}

OptimizeResult optimize_query(std::span<const QueryFormula> query, std::span<const Formula> implicit,
                              const QPartition& ref_qp, std::span<const Diagnosis> diagnoses, const Dpi& dpi) {
  std::vector<QueryFormula> reference;
  for (const auto& f : implicit) reference.push_back(QueryFormula{f, std::nullopt});

  auto prob = [&](const QueryFormula& q) { return q.kb_index ? dpi.fault_probability(*q.kb_index) : 0.0; };
  std::vector<QueryFormula> explicit_part(query.begin(), query.end());
  std::stable_sort(explicit_part.begin(), explicit_part.end(), [&](const QueryFormula& a, const QueryFormula& b) {
    if (prob(a) != prob(b)) return prob(a) < prob(b);
    return a.kb_index.value_or(0) < b.kb_index.value_or(0);
  });
  reference.insert(reference.end(), explicit_part.begin(), explicit_part.end());

  QPPreservation check(reference, ref_qp, diagnoses, dpi);
  std::vector<std::size_t> order(reference.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  PositionIds kept = min_q(order, check);

  OptimizeResult out;
  kept.for_each([&](std::size_t p) { out.query.push_back(reference[p]); });
  out.preservation_calls = check.calls();
  return out;
}

}  // namespace sd
