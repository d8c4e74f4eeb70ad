#pragma once

#include <string>

#include "sd/dpi.hpp"
#include "sd/diag.hpp"
#include "sd/generator.hpp"

namespace fixtures {

inline sd::Dpi ex1() { return sd::load_dpi(std::string(SD_DATA_DIR) + "/ex1.dpi"); }

// D1 = {1,2,5}, D2 = {1,3,5}, D3 = {3,4,5}, zero-based.
inline std::vector<sd::Diagnosis> ex1_diagnoses() { return {{0, 1, 4}, {0, 2, 4}, {2, 3, 4}}; }

inline sd::Formula parse(const sd::Dpi& dpi, const std::string& text) {
  return sd::parse_formula(text, *dpi.shared_atoms());
}

/// The small random corpus shared by the property tests.
inline sd::Dpi corpus(std::uint64_t seed) {
  sd::RandomDpiOptions o;
  o.atoms = 4 + seed % 3;
  o.kb_size = 6 + seed % 5;
  o.planted_chains = 1 + seed % 2;
  o.background = seed % 7 == 3;
  o.positive = seed % 5 == 2;
  return sd::random_dpi(o, seed);
}

}  // namespace fixtures
