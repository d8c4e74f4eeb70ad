#include <benchmark/benchmark.h>

#include "sd/diag.hpp"
#include "sd/enrich.hpp"
#include "sd/generator.hpp"
#include "sd/optimize.hpp"
#include "sd/qpsearch.hpp"
#include "sd/queryselect.hpp"
#include "sd/reasoner.hpp"
#include "sd/std_method.hpp"

namespace {

std::vector<std::size_t> chains_for(std::int64_t diagnoses) {
  switch (diagnoses) {
    case 10: return {5, 2};
    case 20: return {5, 4};
    case 40: return {5, 4, 2};
    default: return {5, 3};  // 15
  }
}

struct Fixture {
  sd::Dpi dpi;
  std::vector<sd::Diagnosis> diagnoses;
  std::vector<double> probs;

  explicit Fixture(std::int64_t n)
      : dpi(sd::chain_dpi(chains_for(n), 4, 1)),
        diagnoses(sd::leading_diagnoses(dpi, static_cast<std::size_t>(n), sd::DiagnosisRank::MinCardinality)),
        probs(sd::diagnosis_priors(diagnoses, dpi)) {}
};

void BM_LeadingDiagnoses(benchmark::State& state) {
  auto dpi = sd::chain_dpi(chains_for(state.range(0)), 4, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(sd::leading_diagnoses(dpi, static_cast<std::size_t>(state.range(0)), sd::DiagnosisRank::MinCardinality));
}
BENCHMARK(BM_LeadingDiagnoses)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_P1P2(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    sd::CqpSpace space(f.diagnoses);
    auto r = sd::find_qpartition(space, f.probs, sd::Measure::entropy());
    benchmark::DoNotOptimize(sd::select_query(r.node, {}));
  }
}
BENCHMARK(BM_P1P2)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_P3P4(benchmark::State& state) {
  Fixture f(state.range(0));
  sd::CqpSpace space(f.diagnoses);
  auto r = sd::find_qpartition(space, f.probs, sd::Measure::entropy());
  auto ids = sd::select_query(r.node, {});
  std::vector<sd::QueryFormula> q;
  std::vector<sd::Formula> plain;
  ids.for_each([&](std::size_t i) {
    q.push_back({f.dpi.kb()[i], i});
    plain.push_back(f.dpi.kb()[i]);
  });
  for (auto _ : state) {
    auto e = sd::enrich_query(plain, f.diagnoses, f.dpi);
    benchmark::DoNotOptimize(sd::optimize_query(q, e.implicit, r.node.partition, f.diagnoses, f.dpi));
  }
}
BENCHMARK(BM_P3P4)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_StdMethod(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sd::std_method_query(f.diagnoses, f.probs, f.dpi, sd::Measure::entropy(), 1.0, 1));
}
BENCHMARK(BM_StdMethod)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_Entailment(benchmark::State& state) {
  Fixture f(40);
  auto kb = sd::solution_kb(f.diagnoses[0], f.dpi);
  for (auto _ : state) {
    sd::Reasoner r(kb);
    benchmark::DoNotOptimize(r.entails(f.dpi.negative()[0].formulas));
  }
}
BENCHMARK(BM_Entailment);

}  // namespace

BENCHMARK_MAIN();
