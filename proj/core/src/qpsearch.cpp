#include "sd/qpsearch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace sd {

FormulaIds discrimination_formulas(std::span<const Diagnosis> diagnoses) {
  if (diagnoses.size() < 2) throw std::invalid_argument("discrimination formulas need at least two diagnoses");
  FormulaIds all = diagnoses[0];
  FormulaIds common = diagnoses[0];
  for (const auto& d : diagnoses.subspan(1)) {
    all |= d;
    common &= d;
  }
  return all - common;
}

CqpSpace::CqpSpace(std::vector<Diagnosis> diagnoses) : diagnoses_(std::move(diagnoses)) {
  disc_ = discrimination_formulas(diagnoses_);
  for (const auto& d : diagnoses_) union_ |= d;
}

std::optional<FormulaIds> CqpSpace::canonical_query(const DiagnosisIds& dplus) const {
  if (dplus.empty() || dplus == DiagnosisIds::range(size()) || !dplus.is_subset_of(DiagnosisIds::range(size())))
    throw std::invalid_argument("canonical query seed must be a non-empty proper subset of the diagnoses");
  FormulaIds u;
  dplus.for_each([&](std::size_t i) { u |= diagnoses_[i]; });
  FormulaIds cq = disc_ - u;
  if (cq.empty()) return std::nullopt;
  return cq;
}

SearchNode CqpSpace::make_node(DiagnosisIds dplus) const {
  SearchNode n;
  dplus.for_each([&](std::size_t i) { n.dplus_union |= diagnoses_[i]; });
  n.cq = disc_ - n.dplus_union;
  n.partition.dminus = DiagnosisIds::range(size()) - dplus;
  n.partition.dplus = std::move(dplus);
  n.partition.dminus.for_each([&](std::size_t i) { n.traits.emplace_back(i, diagnoses_[i] - n.dplus_union); });
  return n;
}

SearchNode CqpSpace::node_for_query(const FormulaIds& cq) const {
  DiagnosisIds dplus;
  for (std::size_t i = 0; i < size(); ++i)
    if (!diagnoses_[i].intersects(cq)) dplus.insert(i);
  SearchNode n = make_node(std::move(dplus));
  n.cq = cq;
  return n;
}

SearchNode CqpSpace::initial() const {
  SearchNode n;
  n.partition.dminus = DiagnosisIds::range(size());
  return n;
}

std::vector<SearchNode> CqpSpace::expand(const SearchNode& node) const {
  std::vector<SearchNode> out;
  if (node.is_initial()) {
    for (std::size_t i = 0; i < size(); ++i) out.push_back(make_node(DiagnosisIds{i}));
    return out;
  }

  // Equivalence classes of dminus under trait equality, in order of first member.
  std::vector<std::pair<FormulaIds, DiagnosisIds>> classes;
  for (const auto& [id, trait] : node.traits) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return c.first == trait; });
    if (it == classes.end()) {
      classes.emplace_back(trait, DiagnosisIds{id});
    } else {
      it->second.insert(id);
    }
  }
  if (classes.size() < 2) return out;

  for (const auto& [trait, members] : classes) {
    bool minimal = std::none_of(classes.begin(), classes.end(),
                                [&](const auto& other) { return other.first.is_proper_subset_of(trait); });
    if (minimal) out.push_back(make_node(node.partition.dplus | members));
  }
  return out;
}

std::vector<QPartition> CqpSpace::enumerate_cqps() const {
  if (size() > 15) throw std::length_error("CQP enumeration limited to 15 diagnoses");
  std::vector<QPartition> out;
  std::unordered_set<DiagnosisIds, IdSetHash> seen;
  const std::size_t n = size();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    DiagnosisIds seed;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) seed.insert(i);
    auto cq = canonical_query(seed);
    if (!cq) continue;
    SearchNode node = node_for_query(*cq);
    if (seen.insert(node.partition.dplus).second) out.push_back(node.partition);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measures

namespace {

double plogp(double p) { return p <= 0.0 ? 0.0 : p * std::log2(p); }

double mass(const DiagnosisIds& ids, std::span<const double> probs) {
  double s = 0;
  ids.for_each([&](std::size_t i) { s += probs[i]; });
  return s;
}

}  // namespace

double evaluate_measure(const Measure& m, const QPartition& partition, std::span<const double> probs) {
  double total = 0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-9) throw UnnormalizedProbabilities();

  switch (m.kind) {
    case MeasureKind::SplitInHalf: {
      double plus = static_cast<double>(partition.dplus.size());
      double minus = static_cast<double>(partition.dminus.size());
      return std::abs(plus - minus) + static_cast<double>(partition.dzero.size());
    }
    case MeasureKind::Entropy: {
      double zero = mass(partition.dzero, probs);
      double plus = mass(partition.dplus, probs) + 0.5 * zero;
      double minus = 1.0 - plus;
      return plogp(plus) + plogp(minus) + zero + 1.0;
    }
  }
  return 0;
}

double measure_optimum_bound(const Measure& m, std::size_t diagnoses) {
  return m.kind == MeasureKind::SplitInHalf ? static_cast<double>(diagnoses % 2) : 0.0;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Scored {
  SearchNode node;
  double value;
};

bool better(const Scored& a, const Scored& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.node.partition.dplus.size() != b.node.partition.dplus.size())
    return a.node.partition.dplus.size() < b.node.partition.dplus.size();
  return lex_less(a.node.partition.dplus, b.node.partition.dplus);
}

class Search {
 public:
  Search(const CqpSpace& space, std::span<const double> probs, const Measure& m, std::size_t budget)
      : space_(space), probs_(probs), m_(m), budget_(budget),
        goal_(measure_optimum_bound(m, space.size()) + m.threshold + 1e-12) {}

  SearchResult run() {
    SearchResult r;
    bool found = dfs(space_.initial());
    if (best_) {
      r.node = best_->node;
      r.value = best_->value;
    }
    r.goal_reached = found;
    r.budget_exhausted = exhausted_;
    r.stats = stats_;
    return r;
  }

 private:
  // Moving diagnoses into dplus only grows |dplus| and p(dplus); once a
  // node is at or past the balance point its descendants are no better.
  bool past_balance(const SearchNode& n) const {
    if (m_.kind == MeasureKind::Entropy) return mass(n.partition.dplus, probs_) >= 0.5;
    return n.partition.dplus.size() >= n.partition.dminus.size();
  }

  bool dfs(const SearchNode& node) {
    if (stats_.expanded >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++stats_.expanded;
    std::vector<Scored> succ;
    for (auto& s : space_.expand(node)) {
      ++stats_.generated;
      if (!visited_.insert(s.dplus_union).second) continue;
      double v = evaluate_measure(m_, s.partition, probs_);
      succ.push_back(Scored{std::move(s), v});
    }
    std::sort(succ.begin(), succ.end(), better);
    if (!succ.empty() && (!best_ || better(succ.front(), *best_))) best_ = succ.front();
    if (!succ.empty() && succ.front().value <= goal_) {
      best_ = succ.front();
      return true;
    }
    for (const auto& s : succ) {
      if (past_balance(s.node)) {
        ++stats_.pruned;
        continue;
      }
      if (dfs(s.node)) return true;
      if (exhausted_) return false;
    }
    return false;
  }

  const CqpSpace& space_;
  std::span<const double> probs_;
  Measure m_;
  std::size_t budget_;
  double goal_;
  std::unordered_set<FormulaIds, IdSetHash> visited_;
  std::optional<Scored> best_;
  SearchStats stats_;
  bool exhausted_ = false;
};

}  // namespace

SearchResult find_qpartition(const CqpSpace& space, std::span<const double> probs, const Measure& m,
                             std::size_t node_budget) {
  if (space.size() < 2) throw std::invalid_argument("at least two minimal diagnoses are required");
  if (probs.size() != space.size()) throw std::invalid_argument("one probability per diagnosis required");
  return Search(space, probs, m, node_budget).run();
}

}  // namespace sd
