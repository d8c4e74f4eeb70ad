#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "sd/formula.hpp"
#include "sd/sat.hpp"

namespace sd {

/// Per-thread reasoner instrumentation. `calls()` counts top-level
/// judgments (consistency, entailment, Ent_T); `sat_probes` counts the
/// underlying solver invocations.
struct ReasonerStats {
  std::uint64_t consistency_checks = 0;
  std::uint64_t entailment_checks = 0;
  std::uint64_t ent_t_calls = 0;
  std::uint64_t sat_probes = 0;

  std::uint64_t calls() const { return consistency_checks + entailment_checks + ent_t_calls; }

  ReasonerStats operator-(const ReasonerStats& o) const {
    return {consistency_checks - o.consistency_checks, entailment_checks - o.entailment_checks,
            ent_t_calls - o.ent_t_calls, sat_probes - o.sat_probes};
  }
  ReasonerStats& operator+=(const ReasonerStats& o) {
    consistency_checks += o.consistency_checks;
    entailment_checks += o.entailment_checks;
    ent_t_calls += o.ent_t_calls;
    sat_probes += o.sat_probes;
    return *this;
  }
};

ReasonerStats& reasoner_stats();
void reset_reasoner_stats();

class InconsistentPremises : public std::logic_error {
 public:
  InconsistentPremises() : std::logic_error("premises are inconsistent; entailment trivializes") {}
};

/// SAT-backed reasoner over a fixed premise set. Formulas are Tseitin
/// encoded once; each query is answered with assumptions on the same solver.
class Reasoner {
 public:
  Reasoner() = default;
  explicit Reasoner(std::span<const Formula> premises) { add(premises); }

  void add(const Formula& f);
  void add(std::span<const Formula> fs) {
    for (const auto& f : fs) add(f);
  }

  bool consistent();
  /// True iff the premises entail every formula in `conclusions`.
  bool entails(std::span<const Formula> conclusions);
  bool entails(const Formula& f) { return entails(std::span<const Formula>(&f, 1)); }

  std::vector<Formula> entailed_literals(std::span<const AtomId> atoms);
  std::vector<Formula> entailed_binary_implications(std::span<const AtomId> atoms);
  /// Ent_T: literals followed by binary implications, counted as one call.
  std::vector<Formula> entailed_simple_formulas(std::span<const AtomId> atoms);

 private:
  Lit encode(const Formula& f);
  Lit atom_lit(AtomId a);
  bool probe(std::span<const Lit> assumptions);
  void require_consistent();
  std::vector<Formula> literals_impl(std::span<const AtomId> atoms);
  std::vector<Formula> implications_impl(std::span<const AtomId> atoms);

  SatSolver solver_;
  std::unordered_map<std::uint32_t, std::uint32_t> atom_vars_;
  std::unordered_map<const void*, Lit> cache_;
  std::vector<Formula> pinned_;  // keeps cached node addresses alive
  std::vector<std::vector<bool>> models_;
  std::vector<AtomId> model_atoms_;
  int consistent_ = -1;
};

bool is_consistent(std::span<const Formula> formulas);
bool entails(std::span<const Formula> premises, std::span<const Formula> conclusions);
std::vector<Formula> entailed_literals(std::span<const Formula> premises, std::span<const AtomId> atoms);
std::vector<Formula> entailed_binary_implications(std::span<const Formula> premises,
                                                  std::span<const AtomId> atoms);
std::vector<Formula> entailed_simple_formulas(std::span<const Formula> premises, std::span<const AtomId> atoms);

}  // namespace sd
