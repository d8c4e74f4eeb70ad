#include "sd/enrich.hpp"

#include <stdexcept>
#include <unordered_set>

namespace sd {

EnrichResult enrich_query(std::span<const Formula> query, std::span<const Diagnosis> diagnoses, const Dpi& dpi) {
  const ReasonerStats before = reasoner_stats();

  FormulaIds u;
  for (const auto& d : diagnoses) u |= d;
  std::vector<Formula> base = dpi.select(dpi.all_formulas() - u);
  base.insert(base.end(), dpi.fixed_part().begin(), dpi.fixed_part().end());

  std::vector<Formula> without;
  {
    Reasoner r(base);
    without = r.entailed_simple_formulas(dpi.atom_ids());
  }
  std::vector<Formula> with;
  {
    Reasoner r(base);
    r.add(query);
    try {
      with = r.entailed_simple_formulas(dpi.atom_ids());
    } catch (const InconsistentPremises&) {
      throw std::logic_error("query is inconsistent with the shared part of all solution KBs");
    }
  }

  std::unordered_set<Formula, FormulaHash> excluded;
  for (const auto& f : without) excluded.insert(normalize(f));
  for (const auto& f : query) excluded.insert(normalize(f));
  for (const auto& f : dpi.kb()) excluded.insert(normalize(f));
  for (const auto& f : dpi.fixed_part()) excluded.insert(normalize(f));

  EnrichResult out;
  for (const auto& f : with)
    if (!excluded.count(normalize(f))) out.implicit.push_back(f);
  out.reasoner = reasoner_stats() - before;
  return out;
}

}  // namespace sd
