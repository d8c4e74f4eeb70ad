#include "sd/diag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "sd/quickxplain.hpp"

namespace sd {

std::optional<ConflictSet> minimal_conflict(std::span<const std::size_t> candidates, const Dpi& dpi) {
  auto faulty = [&](const std::vector<std::size_t>& ids) { return is_faulty(FormulaIds::from(ids), dpi); };
  auto found = quick_xplain(candidates, faulty);
  if (!found) return std::nullopt;
  return FormulaIds::from(*found);
}

namespace {

struct OpenNode {
  double cost;
  FormulaIds path;
};

struct OpenOrder {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    return lex_less(a.path, b.path);
  }
};

// Non-negative step costs keep uniform-cost order consistent with the rank.
// For probabilities the step cost is log((1-p)/p), exact when p < 0.5.
std::vector<double> step_costs(const Dpi& dpi, DiagnosisRank rank) {
  std::vector<double> w(dpi.kb_size(), 1.0);
  if (rank == DiagnosisRank::MaxProbability) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      double p = dpi.fault_probability(i);
      w[i] = std::max(std::log((1.0 - p) / p), 1e-9);
    }
  }
  return w;
}

}  // namespace

std::vector<Diagnosis> leading_diagnoses(const Dpi& dpi, std::size_t n, DiagnosisRank rank, HsTreeStats* stats) {
  HsTreeStats local;
  HsTreeStats& st = stats ? *stats : local;
  std::vector<Diagnosis> found;
  if (n == 0) return found;

  const auto weights = step_costs(dpi, rank);
  std::vector<ConflictSet> conflicts;
  std::set<OpenNode, OpenOrder> open;
  std::unordered_set<FormulaIds, IdSetHash> generated;

  open.insert(OpenNode{0.0, FormulaIds{}});
  generated.insert(FormulaIds{});
  ++st.nodes_generated;

  while (!open.empty() && found.size() < n) {
    OpenNode node = *open.begin();
    open.erase(open.begin());

    bool pruned = std::any_of(found.begin(), found.end(), [&](const Diagnosis& d) { return d.is_subset_of(node.path); });
    if (pruned) continue;
    ++st.nodes_expanded;

    const ConflictSet* label = nullptr;
    for (const auto& c : conflicts) {
      if (!c.intersects(node.path)) {
        label = &c;
        ++st.labels_reused;
        break;
      }
    }
    if (!label) {
      auto candidates = (dpi.all_formulas() - node.path).to_vector();
      auto c = minimal_conflict(candidates, dpi);
      ++st.conflicts_computed;
      if (!c) {
        found.push_back(node.path);
        continue;
      }
      conflicts.push_back(std::move(*c));
      label = &conflicts.back();
    }

    label->for_each([&](std::size_t e) {
      FormulaIds child = node.path;
      child.insert(e);
      if (!generated.insert(child).second) return;
      ++st.nodes_generated;
      open.insert(OpenNode{node.cost + weights[e], std::move(child)});
    });
  }
  return found;
}

std::vector<double> diagnosis_priors(std::span<const Diagnosis> diagnoses, const Dpi& dpi) {
  std::vector<double> logp(diagnoses.size(), 0.0);
  for (std::size_t d = 0; d < diagnoses.size(); ++d) {
    for (std::size_t i = 0; i < dpi.kb_size(); ++i) {
      double p = dpi.fault_probability(i);
      logp[d] += diagnoses[d].contains(i) ? std::log(p) : std::log1p(-p);
    }
  }
  if (logp.empty()) return logp;
  double top = *std::max_element(logp.begin(), logp.end());
  double total = 0;
  for (double& x : logp) {
    x = std::exp(x - top);
    total += x;
  }
  for (double& x : logp) x /= total;
  return logp;
}

namespace {

// Visits all subsets of [0, n) by ascending cardinality, then lexicographically.
template <class F>
void subsets_by_size(std::size_t n, F&& visit) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= n; ++k) {
    idx.resize(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (;;) {
      visit(FormulaIds::from(idx));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

template <class Pred>
std::vector<FormulaIds> minimal_subsets(const Dpi& dpi, Pred&& keep) {
  if (dpi.kb_size() > kBruteForceLimit) throw std::length_error("brute force limited to 20 KB formulas");
  std::vector<FormulaIds> out;
  subsets_by_size(dpi.kb_size(), [&](const FormulaIds& s) {
    for (const auto& m : out)
      if (m.is_subset_of(s)) return;
    if (keep(s)) out.push_back(s);
  });
  return out;
}

}  // namespace

std::vector<Diagnosis> brute_force_diagnoses(const Dpi& dpi) {
  return minimal_subsets(dpi, [&](const FormulaIds& d) { return is_diagnosis(d, dpi); });
}

std::vector<ConflictSet> brute_force_conflicts(const Dpi& dpi) {
  return minimal_subsets(dpi, [&](const FormulaIds& c) { return is_faulty(c, dpi); });
}

}  // namespace sd
