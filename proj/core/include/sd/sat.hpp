#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sd {

/// Literal over solver variables: 2*var for the positive, 2*var+1 for the
/// negative phase.
struct Lit {
  std::uint32_t code = 0;

  static Lit pos(std::uint32_t var) { return Lit{var << 1}; }
  static Lit neg(std::uint32_t var) { return Lit{(var << 1) | 1U}; }
  std::uint32_t var() const { return code >> 1; }
  bool negative() const { return code & 1U; }
  Lit operator~() const { return Lit{code ^ 1U}; }
  bool operator==(const Lit&) const = default;
};

/// Complete DPLL search with two-watched-literal propagation and
/// chronological backtracking. Branches on the lowest unassigned variable,
/// false phase first, so answers and models are reproducible.
class SatSolver {
 public:
  std::uint32_t new_var();
  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assigns_.size()); }

  /// Adds a clause at decision level 0. Returns false if the clause set
  /// became trivially unsatisfiable.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

  bool solve(std::span<const Lit> assumptions = {});

  /// Value of `var` in the last satisfying assignment.
  bool model_value(std::uint32_t var) const { return model_[var] > 0; }

  std::uint64_t solve_calls() const { return solve_calls_; }

 private:
  enum : std::int8_t { kFalse = -1, kUnset = 0, kTrue = 1 };

  std::int8_t value(Lit l) const {
    std::int8_t v = assigns_[l.var()];
    return l.negative() ? static_cast<std::int8_t>(-v) : v;
  }
  void assign(Lit l);
  bool propagate();
  void backtrack_to(std::size_t level);

  struct Level {
    std::size_t trail_start;
    Lit decision;
    bool flipped;
  };

  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<std::uint32_t>> watches_;  // by literal code: clauses watching it
  std::vector<std::int8_t> assigns_;
  std::vector<std::int8_t> model_;
  std::vector<Lit> trail_;
  std::vector<Level> levels_;
  std::size_t qhead_ = 0;
  bool root_conflict_ = false;
  std::uint64_t solve_calls_ = 0;
};

}  // namespace sd
