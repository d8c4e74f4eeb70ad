#include "sd/sat.hpp"

#include <algorithm>

namespace sd {

std::uint32_t SatSolver::new_var() {
  auto v = num_vars();
  assigns_.push_back(kUnset);
  watches_.emplace_back();
  watches_.emplace_back();
  return v;
}

void SatSolver::assign(Lit l) {
  assigns_[l.var()] = l.negative() ? kFalse : kTrue;
  trail_.push_back(l);
}

bool SatSolver::add_clause(std::span<const Lit> lits) {
  if (root_conflict_) return false;
  std::vector<Lit> c;
  c.reserve(lits.size());
  for (Lit l : lits) {
    if (value(l) == kTrue) return true;
    if (value(l) == kFalse) continue;
    if (std::find(c.begin(), c.end(), ~l) != c.end()) return true;
    if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
  }
  if (c.empty()) {
    root_conflict_ = true;
    return false;
  }
  if (c.size() == 1) {
    assign(c[0]);
    if (!propagate()) root_conflict_ = true;
    return !root_conflict_;
  }
  auto idx = static_cast<std::uint32_t>(clauses_.size());
  watches_[c[0].code].push_back(idx);
  watches_[c[1].code].push_back(idx);
  clauses_.push_back(std::move(c));
  return true;
}

// Clauses watch their first two literals; when a watched literal turns
// false the clause looks for a replacement or becomes unit/conflicting.
bool SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = ~p;
    auto& ws = watches_[false_lit.code];
    std::size_t keep = 0;
    bool conflict = false;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      std::uint32_t ci = ws[i];
      if (conflict) {
        ws[keep++] = ci;
        continue;
      }
      auto& c = clauses_[ci];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) == kTrue) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[c[1].code].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = ci;
      if (value(c[0]) == kFalse) {
        conflict = true;
      } else {
        assign(c[0]);
      }
    }
    ws.resize(keep);
    if (conflict) {
      qhead_ = trail_.size();
      return false;
    }
  }
  return true;
}

void SatSolver::backtrack_to(std::size_t level) {
  if (levels_.size() <= level) return;
  std::size_t start = levels_[level].trail_start;
  for (std::size_t i = trail_.size(); i > start; --i) assigns_[trail_[i - 1].var()] = kUnset;
  trail_.resize(start);
  qhead_ = start;
  levels_.resize(level);
}

bool SatSolver::solve(std::span<const Lit> assumptions) {
  ++solve_calls_;
  if (root_conflict_) return false;
  bool result = false;

  // Assumptions each occupy one decision level that is never flipped.
  std::size_t fixed_levels = 0;
  bool assumption_conflict = false;
  for (Lit a : assumptions) {
    if (value(a) == kTrue) continue;
    if (value(a) == kFalse) {
      assumption_conflict = true;
      break;
    }
    levels_.push_back(Level{trail_.size(), a, true});
    ++fixed_levels;
    assign(a);
    if (!propagate()) {
      assumption_conflict = true;
      break;
    }
  }

  if (!assumption_conflict) {
    std::uint32_t next_var = 0;
    for (;;) {
      if (!propagate()) {
        // Undo exhausted decisions; flip the most recent open one.
        while (levels_.size() > fixed_levels && levels_.back().flipped) backtrack_to(levels_.size() - 1);
        if (levels_.size() <= fixed_levels) break;
        Lit d = levels_.back().decision;
        backtrack_to(levels_.size() - 1);
        levels_.push_back(Level{trail_.size(), ~d, true});
        assign(~d);
        next_var = 0;
        continue;
      }
      while (next_var < num_vars() && assigns_[next_var] != kUnset) ++next_var;
      if (next_var == num_vars()) {
        model_ = assigns_;
        result = true;
        break;
      }
      Lit d = Lit::neg(next_var);
      levels_.push_back(Level{trail_.size(), d, false});
      assign(d);
    }
  }

  backtrack_to(0);
  return result;
}

}  // namespace sd
