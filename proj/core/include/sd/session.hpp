#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sd/diag.hpp"
#include "sd/dpi.hpp"
#include "sd/optimize.hpp"
#include "sd/qpsearch.hpp"
#include "sd/queryselect.hpp"
#include "sd/reasoner.hpp"

namespace sd {

class InsufficientDiagnoses : public std::runtime_error {
 public:
  InsufficientDiagnoses() : std::runtime_error("at least two minimal diagnoses are required") {}
};

class NoPendingQuery : public std::logic_error {
 public:
  NoPendingQuery() : std::logic_error("no pending query") {}
};

/// How P1 picks the q-partition. RandomCqp is the uniform baseline used in
/// experiments.
enum class QpStrategy { Measure, RandomCqp };

struct SessionConfig {
  std::size_t leading = 10;
  DiagnosisRank rank = DiagnosisRank::MinCardinality;
  Measure measure = Measure::entropy();
  CriterionKind criterion = CriterionKind::MinCardinality;
  bool enrich = false;
  bool minimize_explicit = false;  // run P4 without P3
  double sigma = 0.95;
  std::size_t node_budget = kDefaultNodeBudget;
  QpStrategy strategy = QpStrategy::Measure;
  std::uint64_t seed = 0;
};

struct PhaseValues {
  double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
  PhaseValues& operator+=(const PhaseValues& o) {
    p1 += o.p1;
    p2 += o.p2;
    p3 += o.p3;
    p4 += o.p4;
    return *this;
  }
};

struct PendingQuery {
  std::vector<QueryFormula> formulas;
  QPartition partition;  // over the session's current diagnoses
  PhaseValues timings_ms;
  PhaseValues reasoner_calls;
  ReasonerStats p3_reasoner;
  double measure_value = 0;
  bool threshold_met = false;
  bool budget_exhausted = false;
  SearchStats search;
  HittingSetStats hitting_sets;
  std::size_t cq_size = 0;
  std::size_t p2_size = 0;
  std::size_t p3_size = 0;
};

/// One answered query. Diagnoses are lists of 1-based KB formula ids.
struct RoundRecord {
  std::size_t round = 0;
  std::vector<std::string> query_formulas;
  std::vector<std::vector<std::size_t>> dplus, dminus, dzero;
  bool answer = false;
  std::vector<std::vector<std::size_t>> eliminated;
  PhaseValues timings_ms;
  PhaseValues reasoner_calls;
};

/// Single JSON object (no trailing newline) in the transcript schema.
std::string to_json(const RoundRecord& r);

std::vector<std::size_t> one_based(const FormulaIds& ids);

struct AnswerOutcome {
  std::vector<Diagnosis> eliminated;
  std::vector<Diagnosis> remaining;
  bool finished = false;
  std::optional<Diagnosis> final_diagnosis;
};

/// Sequential diagnosis loop over an evolving DPI. Strictly alternates
/// next_query() and submit_answer(); not thread-safe.
class Session {
 public:
  Session(Dpi dpi, SessionConfig config);

  const Dpi& dpi() const { return dpi_; }
  const SessionConfig& config() const { return config_; }
  std::span<const Diagnosis> diagnoses() const { return diagnoses_; }
  std::span<const double> probabilities() const { return probs_; }
  std::span<const RoundRecord> history() const { return history_; }

  bool finished() const;
  /// Single survivor, or the most probable diagnosis once one reaches sigma.
  std::optional<Diagnosis> final_diagnosis() const;
  /// More than one diagnosis reached sigma at once.
  bool ambiguous() const;

  bool has_pending() const { return pending_.has_value(); }
  /// Computes (or returns the cached) query for the current round.
  const PendingQuery& next_query();
  AnswerOutcome submit_answer(bool answer);

  double last_diagnosis_ms() const { return diagnosis_ms_; }

 private:
  void refresh(std::vector<Diagnosis> keep);
  SearchNode random_cqp(const CqpSpace& space);

  Dpi dpi_;
  SessionConfig config_;
  std::vector<Diagnosis> diagnoses_;
  std::vector<double> probs_;
  bool unique_ = false;
  std::optional<PendingQuery> pending_;
  std::vector<RoundRecord> history_;
  std::mt19937_64 rng_;
  double diagnosis_ms_ = 0;
};

/// Truthful answers with respect to a planted target diagnosis.
class SimulatedOracle {
 public:
  explicit SimulatedOracle(Diagnosis target) : target_(std::move(target)) {}
  bool answer(const Dpi& dpi, std::span<const QueryFormula> query) const;
  const Diagnosis& target() const { return target_; }

 private:
  Diagnosis target_;
};

struct SimulationResult {
  std::vector<RoundRecord> rounds;
  std::optional<Diagnosis> final_diagnosis;
  bool correct = false;
  std::size_t queries = 0;
  PhaseValues query_ms;
  PhaseValues reasoner_calls;
  double diagnosis_ms = 0;
};

/// Closed loop against a simulated oracle; throws std::invalid_argument if
/// `target` is not a minimal diagnosis of `dpi`.
SimulationResult run_simulation(const Dpi& dpi, const Diagnosis& target, const SessionConfig& config,
                                std::size_t max_rounds = 1000);

}  // namespace sd
