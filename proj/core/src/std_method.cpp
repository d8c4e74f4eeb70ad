#include "sd/std_method.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "sd/quickxplain.hpp"

namespace sd {

namespace {

bool faulty_with(const std::vector<Formula>& kb, std::span<const Formula> x, const Dpi& dpi) {
  Reasoner r(kb);
  r.add(x);
  if (!r.consistent()) return true;
  for (const auto& n : dpi.negative())
    if (r.entails(n.formulas)) return true;
  return false;
}

}  // namespace

StdMethodResult std_method_query(std::span<const Diagnosis> diagnoses, std::span<const double> probs,
                                 const Dpi& dpi, const Measure& m, double fraction, std::uint64_t seed) {
  if (diagnoses.size() < 2) throw std::invalid_argument("at least two minimal diagnoses are required");
  if (diagnoses.size() > 24) throw std::length_error("seed enumeration limited to 24 diagnoses");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("fraction must lie in (0,1]");

  auto t0 = std::chrono::steady_clock::now();
  const ReasonerStats before = reasoner_stats();
  const std::size_t n = diagnoses.size();

  std::vector<std::uint64_t> seeds((std::uint64_t{1} << n) - 2);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  std::mt19937_64 rng(seed);
  std::shuffle(seeds.begin(), seeds.end(), rng);
  auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(seeds.size())));
  seeds.resize(std::clamp<std::size_t>(take, 1, seeds.size()));

  std::vector<std::vector<Formula>> kbs;
  for (const auto& d : diagnoses) kbs.push_back(solution_kb(d, dpi));
  std::vector<std::optional<std::vector<Formula>>> ent(n);
  auto entailments = [&](std::size_t i) -> const std::vector<Formula>& {
    if (!ent[i]) {
      auto e = Reasoner(kbs[i]).entailed_simple_formulas(dpi.atom_ids());
      for (auto& f : e) f = normalize(f);
      ent[i] = std::move(e);
    }
    return *ent[i];
  };

  StdMethodResult out;
  std::optional<std::vector<Formula>> best;
  for (std::uint64_t mask : seeds) {
    ++out.seeds_considered;
    DiagnosisIds dplus;
    FormulaIds u;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        dplus.insert(i);
        u |= diagnoses[i];
      }
    }

    // Common entailments: explicit K \ U_{D+} plus shared Ent_T formulas.
    std::vector<Formula> x = dpi.select(dpi.all_formulas() - u);
    std::unordered_set<Formula, FormulaHash> seen;
    for (const auto& f : x) seen.insert(normalize(f));
    std::vector<Formula> common;
    bool first = true;
    dplus.for_each([&](std::size_t i) {
      const auto& e = entailments(i);
      if (first) {
        common = e;
        first = false;
        return;
      }
      std::unordered_set<Formula, FormulaHash> here(e.begin(), e.end());
      std::erase_if(common, [&](const Formula& f) { return !here.count(f); });
    });
    for (const auto& f : common)
      if (seen.insert(f).second) x.push_back(f);
    if (x.empty()) continue;

    QPartition qp;
    qp.dplus = dplus;
    for (std::size_t j = 0; j < n; ++j) {
      if (dplus.contains(j)) continue;
      if (Reasoner(kbs[j]).entails(x)) {
        qp.dplus.insert(j);
      } else if (faulty_with(kbs[j], x, dpi)) {
        qp.dminus.insert(j);
      } else {
        qp.dzero.insert(j);
      }
    }
    if (!qp.is_query_partition()) continue;
    double v = evaluate_measure(m, qp, probs);
    if (!best || v < out.value) {
      best = std::move(x);
      out.partition = qp;
      out.value = v;
    }
  }

  if (best) {
    // Monotone for subsets: dminus members must stay refuted and dzero
    // members must not start entailing the query.
    auto holds = [&](const std::vector<Formula>& xs) {
      if (xs.empty()) return false;
      bool ok = true;
      out.partition.dminus.for_each([&](std::size_t j) {
        if (ok && !faulty_with(kbs[j], xs, dpi)) ok = false;
      });
      out.partition.dzero.for_each([&](std::size_t j) {
        if (ok && Reasoner(kbs[j]).entails(xs)) ok = false;
      });
      return ok;
    };
    out.query = quick_xplain(std::span<const Formula>(*best), holds);
  }
  out.reasoner = reasoner_stats() - before;
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace sd
