#include "sd/session.hpp"

#include <algorithm>
#include <chrono>

#include "json.hpp"
#include "sd/enrich.hpp"

namespace sd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<std::vector<std::size_t>> as_lists(const DiagnosisIds& ids, std::span<const Diagnosis> diagnoses) {
  std::vector<std::vector<std::size_t>> out;
  ids.for_each([&](std::size_t i) { out.push_back(one_based(diagnoses[i])); });
  return out;
}

nlohmann::json phases(const PhaseValues& v) {
  return {{"p1", v.p1}, {"p2", v.p2}, {"p3", v.p3}, {"p4", v.p4}};
}

nlohmann::json phase_counts(const PhaseValues& v) {
  return {{"p1", static_cast<std::uint64_t>(v.p1)},
          {"p2", static_cast<std::uint64_t>(v.p2)},
          {"p3", static_cast<std::uint64_t>(v.p3)},
          {"p4", static_cast<std::uint64_t>(v.p4)}};
}

}  // namespace

std::vector<std::size_t> one_based(const FormulaIds& ids) {
  std::vector<std::size_t> out;
  ids.for_each([&](std::size_t i) { out.push_back(i + 1); });
  return out;
}

std::string to_json(const RoundRecord& r) {
  nlohmann::json j;
  j["round"] = r.round;
  j["query_formulas"] = r.query_formulas;
  j["qpartition"] = {{"dplus", r.dplus}, {"dminus", r.dminus}, {"dzero", r.dzero}};
  j["answer"] = r.answer;
  j["eliminated"] = r.eliminated;
  j["timings_ms"] = phases(r.timings_ms);
  j["reasoner_calls"] = phase_counts(r.reasoner_calls);
  return j.dump();
}

Session::Session(Dpi dpi, SessionConfig config)
    : dpi_(std::move(dpi)), config_(std::move(config)), rng_(config_.seed) {
  if (config_.leading == 0) throw std::invalid_argument("leading diagnosis count must be positive");
  refresh({});
}

// Keeps the given survivors and tops the set up to `leading` from a fresh
// HS-Tree run on the current DPI.
void Session::refresh(std::vector<Diagnosis> keep) {
  auto t0 = Clock::now();
  std::size_t want = std::max<std::size_t>(config_.leading, 2);
  if (keep.size() < config_.leading || keep.size() < 2) {
    auto fresh = leading_diagnoses(dpi_, want, config_.rank);
    unique_ = fresh.size() <= 1;
    for (auto& d : fresh) {
      if (keep.size() >= config_.leading) break;
      if (std::find(keep.begin(), keep.end(), d) == keep.end()) keep.push_back(std::move(d));
    }
  }
  diagnoses_ = std::move(keep);
  probs_ = diagnosis_priors(diagnoses_, dpi_);
  diagnosis_ms_ = ms_since(t0);
}

// The sigma test needs at least two competing diagnoses; a lone survivor of
// a truncated leading set always has probability 1.
bool Session::finished() const {
  if (unique_ && diagnoses_.size() <= 1) return true;
  if (diagnoses_.size() < 2) return false;
  return std::any_of(probs_.begin(), probs_.end(), [&](double p) { return p >= config_.sigma; });
}

std::optional<Diagnosis> Session::final_diagnosis() const {
  if (!finished() || diagnoses_.empty()) return std::nullopt;
  auto best = std::max_element(probs_.begin(), probs_.end());
  return diagnoses_[static_cast<std::size_t>(best - probs_.begin())];
}

bool Session::ambiguous() const {
  return std::count_if(probs_.begin(), probs_.end(), [&](double p) { return p >= config_.sigma; }) > 1;
}

SearchNode Session::random_cqp(const CqpSpace& space) {
  if (space.size() <= 15) {
    auto all = space.enumerate_cqps();
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const auto& qp = all[pick(rng_)];
    return space.node_for_query(*space.canonical_query(qp.dplus));
  }
  // Random descent through the successor graph for larger sets.
  SearchNode node = space.initial();
  for (;;) {
    auto succ = space.expand(node);
    if (succ.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
    node = std::move(succ[pick(rng_)]);
    if (std::bernoulli_distribution(0.5)(rng_)) break;
  }
  return node;
}

const PendingQuery& Session::next_query() {
  if (pending_) return *pending_;
  if (diagnoses_.size() < 2) throw InsufficientDiagnoses();

  PendingQuery q;
  ReasonerStats mark = reasoner_stats();
  auto phase_calls = [&]() {
    ReasonerStats now = reasoner_stats();
    auto d = now - mark;
    mark = now;
    return d;
  };

  // P1
  auto t0 = Clock::now();
  CqpSpace space(diagnoses_);
  SearchNode node;
  if (config_.strategy == QpStrategy::Measure) {
    auto r = find_qpartition(space, probs_, config_.measure, config_.node_budget);
    node = std::move(r.node);
    q.measure_value = r.value;
    q.threshold_met = r.goal_reached;
    q.budget_exhausted = r.budget_exhausted;
    q.search = r.stats;
  } else {
    node = random_cqp(space);
    q.measure_value = evaluate_measure(config_.measure, node.partition, probs_);
    q.threshold_met = true;
  }
  q.timings_ms.p1 = ms_since(t0);
  q.reasoner_calls.p1 = static_cast<double>(phase_calls().calls());
  q.cq_size = node.cq ? node.cq->size() : 0;

  // P2
  t0 = Clock::now();
  Criterion crit{config_.criterion, std::vector<double>(dpi_.fault_probabilities().begin(), dpi_.fault_probabilities().end())};
  FormulaIds chosen = select_query(node, crit, &q.hitting_sets);
  std::vector<QueryFormula> query;
  chosen.for_each([&](std::size_t i) { query.push_back(QueryFormula{dpi_.kb()[i], i}); });
  q.timings_ms.p2 = ms_since(t0);
  q.reasoner_calls.p2 = static_cast<double>(phase_calls().calls());
  q.p2_size = query.size();

  // P3
  std::vector<Formula> implicit;
  if (config_.enrich) {
    t0 = Clock::now();
    std::vector<Formula> plain;
    for (const auto& f : query) plain.push_back(f.formula);
    auto e = enrich_query(plain, diagnoses_, dpi_);
    implicit = std::move(e.implicit);
    q.timings_ms.p3 = ms_since(t0);
    q.p3_reasoner = phase_calls();
    q.reasoner_calls.p3 = static_cast<double>(q.p3_reasoner.calls());
    q.p3_size = query.size() + implicit.size();
  }

  // P4
  if (config_.enrich || config_.minimize_explicit) {
    t0 = Clock::now();
    auto o = optimize_query(query, implicit, node.partition, diagnoses_, dpi_);
    query = std::move(o.query);
    q.timings_ms.p4 = ms_since(t0);
    q.reasoner_calls.p4 = static_cast<double>(phase_calls().calls());
  }

  q.formulas = std::move(query);
  q.partition = node.partition;
  pending_ = std::move(q);
  return *pending_;
}

AnswerOutcome Session::submit_answer(bool answer) {
  if (!pending_) throw NoPendingQuery();
  const PendingQuery& q = *pending_;

  std::vector<Formula> formulas;
  for (const auto& f : q.formulas) formulas.push_back(f.formula);
  Dpi next = apply_answer(dpi_, formulas, answer);

  RoundRecord rec;
  rec.round = history_.size() + 1;
  for (const auto& f : formulas) rec.query_formulas.push_back(dpi_.formula_text(f));
  rec.dplus = as_lists(q.partition.dplus, diagnoses_);
  rec.dminus = as_lists(q.partition.dminus, diagnoses_);
  rec.dzero = as_lists(q.partition.dzero, diagnoses_);
  rec.answer = answer;
  rec.timings_ms = q.timings_ms;
  rec.reasoner_calls = q.reasoner_calls;

  const DiagnosisIds& refuted = answer ? q.partition.dminus : q.partition.dplus;
  AnswerOutcome out;
  std::vector<Diagnosis> survivors;
  for (std::size_t i = 0; i < diagnoses_.size(); ++i) {
    if (refuted.contains(i)) {
      out.eliminated.push_back(diagnoses_[i]);
    } else {
      survivors.push_back(diagnoses_[i]);
    }
  }
  rec.eliminated = as_lists(refuted, diagnoses_);

  dpi_ = std::move(next);
  pending_.reset();
  refresh(std::move(survivors));
  history_.push_back(std::move(rec));

  out.remaining = diagnoses_;
  out.finished = finished();
  out.final_diagnosis = final_diagnosis();
  return out;
}

bool SimulatedOracle::answer(const Dpi& dpi, std::span<const QueryFormula> query) const {
  std::vector<Formula> q;
  for (const auto& f : query) q.push_back(f.formula);
  return entails(solution_kb(target_, dpi), q);
}

SimulationResult run_simulation(const Dpi& dpi, const Diagnosis& target, const SessionConfig& config,
                                std::size_t max_rounds) {
  bool minimal = is_diagnosis(target, dpi);
  target.for_each([&](std::size_t i) {
    if (!minimal) return;
    Diagnosis smaller = target;
    smaller.erase(i);
    if (is_diagnosis(smaller, dpi)) minimal = false;
  });
  if (!minimal) throw std::invalid_argument("target is not a minimal diagnosis");

  SimulationResult out;
  Session s(dpi, config);
  out.diagnosis_ms += s.last_diagnosis_ms();
  SimulatedOracle oracle(target);
  while (!s.finished() && out.queries < max_rounds) {
    const auto& q = s.next_query();
    out.query_ms += q.timings_ms;
    out.reasoner_calls += q.reasoner_calls;
    bool a = oracle.answer(s.dpi(), q.formulas);
    s.submit_answer(a);
    out.diagnosis_ms += s.last_diagnosis_ms();
    ++out.queries;
  }
  out.rounds.assign(s.history().begin(), s.history().end());
  out.final_diagnosis = s.final_diagnosis();
  out.correct = out.final_diagnosis && *out.final_diagnosis == target;
  return out;
}

}  // namespace sd
