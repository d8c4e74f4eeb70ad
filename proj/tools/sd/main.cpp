#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "sd/diag.hpp"
#include "sd/dpi.hpp"
#include "sd/generator.hpp"
#include "sd/session.hpp"
#include "sd/std_method.hpp"
#include "service.hpp"

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kInputError = 1;
constexpr int kUsageError = 2;
constexpr int kTooFewDiagnoses = 3;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

std::string ids(const sd::FormulaIds& d) {
  std::string s = "[";
  bool first = true;
  for (auto i : sd::one_based(d)) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "]";
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string partition_text(const sd::QPartition& qp, std::span<const sd::Diagnosis> ds) {
  auto side = [&](const sd::DiagnosisIds& s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](std::size_t i) {
      if (!first) out += " ";
      out += "D" + std::to_string(i + 1) + "=" + ids(ds[i]);
      first = false;
    });
    return out + "}";
  };
  return "D+ " + side(qp.dplus) + "\nD- " + side(qp.dminus) + "\nD0 " + side(qp.dzero);
}

struct Common {
  std::string dpi_path;
  std::size_t n = 10;
  std::string rank = "card";
  std::string measure = "ent";
  std::string criterion = "card";
  double threshold = -1;
  bool enrich = false;
  std::size_t budget = sd::kDefaultNodeBudget;
};

sd::SessionConfig make_config(const Common& c) {
  sd::SessionConfig cfg;
  cfg.leading = c.n;
  cfg.rank = c.rank == "prob" ? sd::DiagnosisRank::MaxProbability : sd::DiagnosisRank::MinCardinality;
  cfg.measure = c.measure == "spl" ? sd::Measure::split_in_half() : sd::Measure::entropy();
  if (c.threshold >= 0) cfg.measure.threshold = c.threshold;
  if (c.criterion == "sumprob") {
    cfg.criterion = sd::CriterionKind::MinSumProbability;
  } else if (c.criterion == "maxprob") {
    cfg.criterion = sd::CriterionKind::MinMaxProbability;
  }
  cfg.enrich = c.enrich;
  cfg.node_budget = c.budget;
  return cfg;
}

void print_diagnoses(const sd::Dpi& dpi, std::span<const sd::Diagnosis> ds, std::span<const double> probs) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::cout << "D" << i + 1 << " " << ids(ds[i]) << " p=" << fixed(probs[i]) << " :";
    ds[i].for_each([&](std::size_t k) { std::cout << "  " << dpi.formula_text(dpi.kb()[k]); });
    std::cout << "\n";
  }
}

int run_diagnose(const Common& c, bool json) {
  auto dpi = sd::load_dpi(c.dpi_path);
  auto t0 = Clock::now();
  auto cfg = make_config(c);
  auto ds = sd::leading_diagnoses(dpi, c.n, cfg.rank);
  double ms = ms_since(t0);
  auto probs = sd::diagnosis_priors(ds, dpi);
  if (json) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      nlohmann::json texts = nlohmann::json::array();
      ds[i].for_each([&](std::size_t k) { texts.push_back(dpi.formula_text(dpi.kb()[k])); });
      std::cout << nlohmann::json{{"diagnosis", i + 1}, {"formulas", sd::one_based(ds[i])}, {"texts", texts},
                                  {"probability", probs[i]}}
                       .dump()
                << "\n";
    }
  } else {
    print_diagnoses(dpi, ds, probs);
  }
  std::cerr << "diagnoses: " << ds.size() << " in " << fixed(ms, 3) << " ms\n";
  return 0;
}

int run_query(const Common& c, bool json) {
  auto dpi = sd::load_dpi(c.dpi_path);
  sd::Session s(std::move(dpi), make_config(c));
  if (s.diagnoses().size() < 2) {
    std::cerr << "insufficient diagnoses for querying (" << s.diagnoses().size() << " found)\n";
    return kTooFewDiagnoses;
  }
  const auto& q = s.next_query();
  if (json) {
    std::cout << sd::service::query_json(s, q).dump() << "\n";
    return 0;
  }
  print_diagnoses(s.dpi(), s.diagnoses(), s.probabilities());
  std::cout << "query:";
  for (const auto& f : q.formulas) {
    std::cout << "  " << s.dpi().formula_text(f.formula);
    if (f.kb_index) std::cout << " (#" << *f.kb_index + 1 << ")";
  }
  std::cout << "\n" << partition_text(q.partition, s.diagnoses()) << "\n";
  std::cout << "measure " << c.measure << " = " << fixed(q.measure_value) << "\n";
  if (!q.threshold_met) std::cout << "note: threshold not met, returning best q-partition found\n";
  std::cout << "reasoner calls p1=" << q.reasoner_calls.p1 << " p2=" << q.reasoner_calls.p2
            << " p3=" << q.reasoner_calls.p3 << " p4=" << q.reasoner_calls.p4 << "\n";
  std::cerr << "time ms p1=" << fixed(q.timings_ms.p1, 3) << " p2=" << fixed(q.timings_ms.p2, 3);
  if (c.enrich) std::cerr << " p3=" << fixed(q.timings_ms.p3, 3) << " p4=" << fixed(q.timings_ms.p4, 3);
  std::cerr << "\n";
  return 0;
}

struct SimulateOptions {
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  double sigma = 1.01;
  bool compare_std = false;
  double std_fraction = 1.0;
  bool json = false;
  bool no_timings = false;
  std::string strategy = "measure";
};

int run_simulate(const Common& c, const SimulateOptions& o) {
  auto dpi = sd::load_dpi(c.dpi_path);
  auto cfg = make_config(c);
  cfg.sigma = o.sigma;
  cfg.seed = o.seed;
  if (o.strategy == "random") cfg.strategy = sd::QpStrategy::RandomCqp;
  auto pool = dpi.kb().size() <= 20 ? sd::brute_force_diagnoses(dpi) : sd::leading_diagnoses(dpi, 100, cfg.rank);
  if (pool.size() < 2) {
    std::cerr << "insufficient diagnoses for querying (" << pool.size() << " found)\n";
    return kTooFewDiagnoses;
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::size_t correct = 0, total_queries = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const auto& target = pool[pick(rng)];
    auto r = sd::run_simulation(dpi, target, cfg);
    correct += r.correct;
    total_queries += r.queries;
    if (o.json) {
      for (auto rec : r.rounds) {
        if (o.no_timings) rec.timings_ms = {};
        std::cout << "{\"trial\":" << t + 1 << ",\"record\":" << sd::to_json(rec) << "}\n";
      }
    } else {
      std::cout << "trial " << t + 1 << ": target " << ids(target) << " queries " << r.queries << " "
                << (r.correct ? "correct" : "WRONG") << "\n";
    }
    if (o.compare_std) {
      sd::Session h(dpi, [&] {
        auto full = cfg;
        full.enrich = true;
        return full;
      }());
      if (h.diagnoses().size() < 2) continue;
      const auto& q = h.next_query();
      double h_calls = q.reasoner_calls.p1 + q.reasoner_calls.p2 + q.reasoner_calls.p3 + q.reasoner_calls.p4;
      double h_ms = q.timings_ms.p1 + q.timings_ms.p2 + q.timings_ms.p3 + q.timings_ms.p4;
      auto s = sd::std_method_query(h.diagnoses(), h.probabilities(), h.dpi(), cfg.measure, o.std_fraction,
                                    o.seed + t);
      if (o.json) {
        nlohmann::json j{{"trial", t + 1},
                         {"compare",
                          {{"diagnoses", h.diagnoses().size()},
                           {"pipeline_calls", h_calls},
                           {"pipeline_p1_p2_calls", q.reasoner_calls.p1 + q.reasoner_calls.p2},
                           {"pipeline_m", q.measure_value},
                           {"std_calls", s.reasoner.calls()},
                           {"std_m", s.value},
                           {"std_seeds", s.seeds_considered}}}};
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "  compare |D|=" << h.diagnoses().size() << " pipeline calls=" << h_calls
                  << " (p1+p2=" << q.reasoner_calls.p1 + q.reasoner_calls.p2 << ") m=" << fixed(q.measure_value, 6)
                  << " std calls=" << s.reasoner.calls() << " m=" << fixed(s.value, 6)
                  << " seeds=" << s.seeds_considered << "\n";
      }
      std::cerr << "  compare time ms pipeline=" << fixed(h_ms, 3) << " std=" << fixed(s.elapsed_ms, 3) << "\n";
    }
  }
  double mean = static_cast<double>(total_queries) / static_cast<double>(o.trials);
  if (o.json) {
    std::cout << nlohmann::json{{"summary", {{"trials", o.trials}, {"correct", correct}, {"mean_queries", mean}}}}.dump()
              << "\n";
  } else {
    std::cout << "correct " << correct << "/" << o.trials << " mean queries " << fixed(mean, 2) << "\n";
  }
  return correct == o.trials ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential model-based diagnosis"};
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* sub, bool querying) {
    sub->add_option("--dpi", c.dpi_path, "DPI file")->required();
    sub->add_option("-n", c.n, "number of leading diagnoses")->check(CLI::PositiveNumber);
    sub->add_option("--rank", c.rank)->check(CLI::IsMember({"card", "prob"}));
    if (!querying) return;
    sub->add_option("--measure", c.measure)->check(CLI::IsMember({"ent", "spl"}));
    sub->add_option("--criterion", c.criterion)->check(CLI::IsMember({"card", "sumprob", "maxprob"}));
    sub->add_option("--threshold", c.threshold, "measure optimality threshold")->check(CLI::NonNegativeNumber);
    sub->add_flag("--enrich", c.enrich, "run enrichment and optimization");
    sub->add_option("--budget", c.budget, "search node budget")->check(CLI::PositiveNumber);
  };

  bool diagnose_json = false;
  auto* diagnose = app.add_subcommand("diagnose", "print leading minimal diagnoses");
  add_common(diagnose, false);
  diagnose->add_flag("--json", diagnose_json);

  bool query_json = false;
  auto* query = app.add_subcommand("query", "compute the first query");
  add_common(query, true);
  query->add_flag("--json", query_json);

  SimulateOptions so;
  auto* simulate = app.add_subcommand("simulate", "closed-loop sessions against random target diagnoses");
  add_common(simulate, true);
  simulate->add_option("--trials", so.trials)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", so.seed);
  simulate->add_option("--sigma", so.sigma);
  simulate->add_option("--strategy", so.strategy)->check(CLI::IsMember({"measure", "random"}));
  simulate->add_flag("--compare-std", so.compare_std, "compare the first query with the reasoner-driven baseline");
  simulate->add_option("--std-fraction", so.std_fraction)->check(CLI::Range(0.0, 1.0));
  simulate->add_flag("--json", so.json, "print transcript records as JSON lines");
  simulate->add_flag("--no-timings", so.no_timings, "zero timing fields in JSON output");

  std::vector<std::size_t> chains{5, 2};
  std::size_t noise = 3;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "print a DPI with planted implication chains");
  generate->add_option("--chains", chains)->delimiter(',');
  generate->add_option("--noise", noise);
  generate->add_option("--seed", gen_seed);

  int port = 8080;
  std::string bind = "127.0.0.1";
  std::string static_dir;
  long ttl = 3600;
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--bind", bind);
  serve->add_option("--static", static_dir, "directory served at /")->check(CLI::ExistingDirectory);
  serve->add_option("--ttl", ttl, "idle session lifetime in seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*diagnose) return run_diagnose(c, diagnose_json);
    if (*query) return run_query(c, query_json);
    if (*simulate) return run_simulate(c, so);
    if (*generate) {
      std::cout << sd::format_dpi(sd::chain_dpi(chains, noise, gen_seed));
      return 0;
    }
    if (*serve) {
      httplib::Server server;
      sd::service::SessionStore store{std::chrono::seconds(ttl)};
      sd::service::ServiceOptions opts;
      opts.ttl = std::chrono::seconds(ttl);
      if (!static_dir.empty()) opts.static_dir = static_dir;
      sd::service::install_routes(server, store, opts);
      std::cerr << "listening on " << bind << ":" << port << "\n";
      return server.listen(bind, port) ? 0 : kInputError;
    }
  } catch (const sd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const sd::AdmissibilityError& e) {
    std::cerr << "not admissible: " << e.what() << "\n";
    return kInputError;
  } catch (const sd::InsufficientDiagnoses& e) {
    std::cerr << e.what() << "\n";
    return kTooFewDiagnoses;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return 0;
}
