#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "sd/dpi.hpp"

namespace sd {

struct RandomDpiOptions {
  std::size_t atoms = 6;
  std::size_t kb_size = 8;
  std::size_t planted_chains = 1;  // implication chains refuted by a negative test
  bool background = false;
  bool positive = false;
  bool explicit_probabilities = true;
};

/// Small seeded instance: planted chains s -> ... -> t with negative test
/// s -> t, padded with random literals, implications, clauses and
/// equivalences. Retries until the instance is admissible.
Dpi random_dpi(const RandomDpiOptions& opts, std::uint64_t seed);

/// Instance whose minimal diagnoses are the product of independent chains:
/// chain lengths {5, 2} give 10 diagnoses, {5, 4, 2} give 40. `noise`
/// formulas over separate atoms never take part in a conflict. KB order is
/// shuffled.
Dpi chain_dpi(std::span<const std::size_t> chain_lengths, std::size_t noise, std::uint64_t seed);

}  // namespace sd
