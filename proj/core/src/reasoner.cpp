#include "sd/reasoner.hpp"

#include <array>

namespace sd {

ReasonerStats& reasoner_stats() {
  thread_local ReasonerStats stats;
  return stats;
}

void reset_reasoner_stats() { reasoner_stats() = ReasonerStats{}; }

Lit Reasoner::atom_lit(AtomId a) {
  auto [it, inserted] = atom_vars_.try_emplace(a.value, 0);
  if (inserted) it->second = solver_.new_var();
  return Lit::pos(it->second);
}

// Tseitin encoding with full equivalences; shared subterms are encoded once.
Lit Reasoner::encode(const Formula& f) {
  if (f.kind() == Connective::Atom) return atom_lit(f.atom_id());
  if (f.kind() == Connective::Not) return ~encode(f.operands()[0]);
  if (auto it = cache_.find(f.identity()); it != cache_.end()) return it->second;

  auto ops = f.operands();
  Lit out = Lit::pos(solver_.new_var());
  switch (f.kind()) {
    case Connective::And:
    case Connective::Or: {
      bool is_and = f.kind() == Connective::And;
      std::vector<Lit> big;
      big.reserve(ops.size() + 1);
      for (const auto& op : ops) {
        Lit x = encode(op);
        // and: out -> x ; or: x -> out
        if (is_and) {
          solver_.add_clause({~out, x});
          big.push_back(~x);
        } else {
          solver_.add_clause({~x, out});
          big.push_back(x);
        }
      }
      big.push_back(is_and ? out : ~out);
      solver_.add_clause(big);
      break;
    }
    case Connective::Implies: {
      Lit a = encode(ops[0]);
      Lit b = encode(ops[1]);
      solver_.add_clause({~out, ~a, b});
      solver_.add_clause({a, out});
      solver_.add_clause({~b, out});
      break;
    }
    case Connective::Iff: {
      Lit a = encode(ops[0]);
      Lit b = encode(ops[1]);
      solver_.add_clause({~out, ~a, b});
      solver_.add_clause({~out, a, ~b});
      solver_.add_clause({out, a, b});
      solver_.add_clause({out, ~a, ~b});
      break;
    }
    default:
      break;
  }
  cache_.emplace(f.identity(), out);
  pinned_.push_back(f);
  return out;
}

void Reasoner::add(const Formula& f) {
  consistent_ = -1;
  models_.clear();
  switch (f.kind()) {
    case Connective::And:
      for (const auto& op : f.operands()) add(op);
      return;
    case Connective::Or: {
      std::vector<Lit> clause;
      for (const auto& op : f.operands()) clause.push_back(encode(op));
      solver_.add_clause(clause);
      return;
    }
    case Connective::Implies:
      solver_.add_clause({~encode(f.operands()[0]), encode(f.operands()[1])});
      return;
    default:
      solver_.add_clause({encode(f)});
      return;
  }
}

bool Reasoner::probe(std::span<const Lit> assumptions) {
  ++reasoner_stats().sat_probes;
  bool sat = solver_.solve(assumptions);
  if (sat && !model_atoms_.empty()) {
    std::vector<bool> m(model_atoms_.size());
    for (std::size_t i = 0; i < model_atoms_.size(); ++i) m[i] = solver_.model_value(atom_lit(model_atoms_[i]).var());
    models_.push_back(std::move(m));
  }
  return sat;
}

bool Reasoner::consistent() {
  ++reasoner_stats().consistency_checks;
  if (consistent_ < 0) consistent_ = probe({}) ? 1 : 0;
  return consistent_ == 1;
}

bool Reasoner::entails(std::span<const Formula> conclusions) {
  ++reasoner_stats().entailment_checks;
  if (conclusions.empty()) return true;
  Lit goal;
  if (conclusions.size() == 1) {
    goal = encode(conclusions[0]);
  } else {
    goal = encode(Formula::conjunction(std::vector<Formula>(conclusions.begin(), conclusions.end())));
  }
  std::array<Lit, 1> assume{~goal};
  return !probe(assume);
}

void Reasoner::require_consistent() {
  if (consistent_ < 0) consistent_ = probe({}) ? 1 : 0;
  if (consistent_ == 0) throw InconsistentPremises();
}

std::vector<Formula> Reasoner::literals_impl(std::span<const AtomId> atoms) {
  model_atoms_.assign(atoms.begin(), atoms.end());
  for (AtomId a : atoms) atom_lit(a);
  models_.clear();
  consistent_ = -1;
  require_consistent();

  // A literal can only be entailed if every known model agrees with it.
  std::vector<Formula> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (bool positive : {true, false}) {
      bool refuted = false;
      for (const auto& m : models_) {
        if (m[i] != positive) {
          refuted = true;
          break;
        }
      }
      if (refuted) continue;
      Lit l = atom_lit(atoms[i]);
      std::array<Lit, 1> assume{positive ? ~l : l};
      if (!probe(assume)) {
        Formula a = Formula::atom(atoms[i]);
        out.push_back(positive ? a : Formula::negation(a));
      }
    }
  }
  return out;
}

std::vector<Formula> Reasoner::implications_impl(std::span<const AtomId> atoms) {
  model_atoms_.assign(atoms.begin(), atoms.end());
  for (AtomId a : atoms) atom_lit(a);
  models_.clear();
  consistent_ = -1;
  require_consistent();

  std::vector<Formula> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (i == j) continue;
      bool refuted = false;
      for (const auto& m : models_) {
        if (m[i] && !m[j]) {
          refuted = true;
          break;
        }
      }
      if (refuted) continue;
      std::array<Lit, 2> assume{atom_lit(atoms[i]), ~atom_lit(atoms[j])};
      if (!probe(assume)) out.push_back(Formula::implication(Formula::atom(atoms[i]), Formula::atom(atoms[j])));
    }
  }
  return out;
}

std::vector<Formula> Reasoner::entailed_literals(std::span<const AtomId> atoms) {
  ++reasoner_stats().ent_t_calls;
  return literals_impl(atoms);
}

std::vector<Formula> Reasoner::entailed_binary_implications(std::span<const AtomId> atoms) {
  ++reasoner_stats().ent_t_calls;
  return implications_impl(atoms);
}

std::vector<Formula> Reasoner::entailed_simple_formulas(std::span<const AtomId> atoms) {
  ++reasoner_stats().ent_t_calls;
  auto out = literals_impl(atoms);
  auto impl = implications_impl(atoms);
  out.insert(out.end(), impl.begin(), impl.end());
  return out;
}

bool is_consistent(std::span<const Formula> formulas) { return Reasoner(formulas).consistent(); }

bool entails(std::span<const Formula> premises, std::span<const Formula> conclusions) {
  return Reasoner(premises).entails(conclusions);
}

std::vector<Formula> entailed_literals(std::span<const Formula> premises, std::span<const AtomId> atoms) {
  return Reasoner(premises).entailed_literals(atoms);
}

std::vector<Formula> entailed_binary_implications(std::span<const Formula> premises,
                                                  std::span<const AtomId> atoms) {
  return Reasoner(premises).entailed_binary_implications(atoms);
}

std::vector<Formula> entailed_simple_formulas(std::span<const Formula> premises, std::span<const AtomId> atoms) {
  return Reasoner(premises).entailed_simple_formulas(atoms);
}

}  // namespace sd
