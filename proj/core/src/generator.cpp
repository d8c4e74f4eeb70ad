#include "sd/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace sd {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double fault_prob(Rng& rng) { return std::uniform_real_distribution<double>(0.01, 0.49)(rng); }

Formula literal(Rng& rng, std::span<const Formula> atoms) {
  Formula a = atoms[pick(rng, atoms.size())];
  return std::bernoulli_distribution(0.3)(rng) ? Formula::negation(a) : a;
}

Formula noise_formula(Rng& rng, std::span<const Formula> atoms) {
  switch (pick(rng, 5)) {
    case 0:
      return literal(rng, atoms);
    case 1:
      return Formula::implication(literal(rng, atoms), literal(rng, atoms));
    case 2:
      return Formula::disjunction({literal(rng, atoms), literal(rng, atoms), literal(rng, atoms)});
    case 3:
      return Formula::implication(Formula::conjunction({literal(rng, atoms), literal(rng, atoms)}),
                                  literal(rng, atoms));
    default:
      return Formula::equivalence(literal(rng, atoms), literal(rng, atoms));
  }
}

}  // namespace

Dpi random_dpi(const RandomDpiOptions& opts, std::uint64_t seed) {
  if (opts.atoms < 2) throw std::invalid_argument("at least two atoms are required");
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto table = std::make_shared<AtomTable>();
    std::vector<Formula> atoms;
    for (std::size_t i = 0; i < opts.atoms; ++i)
      atoms.push_back(Formula::atom(table->intern(std::string(1, static_cast<char>('a' + i)))));

    Dpi::Parts parts;
    for (std::size_t c = 0; c < opts.planted_chains && parts.kb.size() < opts.kb_size; ++c) {
      std::vector<std::size_t> order(atoms.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::size_t len = std::min<std::size_t>(2 + pick(rng, 3), atoms.size() - 1);
      len = std::min(len, opts.kb_size - parts.kb.size());
      for (std::size_t k = 0; k < len; ++k)
        parts.kb.push_back(Formula::implication(atoms[order[k]], atoms[order[k + 1]]));
      parts.negative.push_back(TestCase{{Formula::implication(atoms[order[0]], atoms[order[len]])}});
    }
    while (parts.kb.size() < opts.kb_size) parts.kb.push_back(noise_formula(rng, atoms));
    std::shuffle(parts.kb.begin(), parts.kb.end(), rng);

    if (opts.background) parts.background.push_back(noise_formula(rng, atoms));
    if (opts.positive) parts.positive.push_back(TestCase{{literal(rng, atoms)}});
    if (opts.explicit_probabilities)
      for (std::size_t i = 0; i < parts.kb.size(); ++i) parts.fault_probabilities.push_back(fault_prob(rng));
    try {
      return Dpi(table, std::move(parts));
    } catch (const AdmissibilityError&) {
    }
  }
  throw std::runtime_error("could not generate an admissible instance");
}

Dpi chain_dpi(std::span<const std::size_t> chain_lengths, std::size_t noise, std::uint64_t seed) {
  Rng rng(seed);
  auto table = std::make_shared<AtomTable>();
  auto atom = [&](const std::string& name) { return Formula::atom(table->intern(name)); };

  Dpi::Parts parts;
  for (std::size_t c = 0; c < chain_lengths.size(); ++c) {
    std::size_t len = chain_lengths[c];
    if (len == 0) throw std::invalid_argument("chain length must be positive");
    std::string prefix = "c" + std::to_string(c) + "_";
    for (std::size_t k = 0; k < len; ++k)
      parts.kb.push_back(Formula::implication(atom(prefix + std::to_string(k)), atom(prefix + std::to_string(k + 1))));
    parts.negative.push_back(
        TestCase{{Formula::implication(atom(prefix + "0"), atom(prefix + std::to_string(len)))}});
  }
  std::vector<Formula> free_atoms;
  for (std::size_t i = 0; i < std::max<std::size_t>(noise, 2); ++i) free_atoms.push_back(atom("n" + std::to_string(i)));
  // Only positive implications among free atoms: always satisfiable and
  // unable to reach any chain atom.
  for (std::size_t i = 0; i < noise; ++i) {
    std::size_t a = pick(rng, free_atoms.size());
    std::size_t b = pick(rng, free_atoms.size());
    parts.kb.push_back(Formula::implication(free_atoms[a], free_atoms[b]));
  }
  std::shuffle(parts.kb.begin(), parts.kb.end(), rng);
  for (std::size_t i = 0; i < parts.kb.size(); ++i) parts.fault_probabilities.push_back(fault_prob(rng));
  return Dpi(table, std::move(parts));
}

}  // namespace sd
