#pragma once

// Reference implementations for tests: truth tables instead of the SAT
// solver, subset enumeration instead of HS-Trees, std::set instead of IdSet.

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "sd/dpi.hpp"
#include "sd/formula.hpp"

namespace oracle {

using Set = std::set<std::size_t>;

/// Satisfying assignments of a formula set over the first `atoms` atoms,
/// one flag per assignment (bit k of the index is atom k).
std::vector<char> models(std::span<const sd::Formula> fs, std::size_t atoms);

bool consistent(std::span<const sd::Formula> fs, std::size_t atoms);
bool entails(std::span<const sd::Formula> premises, std::span<const sd::Formula> conclusions, std::size_t atoms);

/// S ∪ B ∪ U_P inconsistent or entailing some negative test case.
bool faulty(std::span<const sd::Formula> s, const sd::Dpi& dpi);

std::vector<sd::Formula> kb_subset(const sd::Dpi& dpi, const Set& ids);
std::vector<sd::Formula> kstar(const sd::Dpi& dpi, const Set& diagnosis);

std::vector<Set> minimal_diagnoses(const sd::Dpi& dpi);
std::vector<Set> minimal_conflicts(const sd::Dpi& dpi);
std::vector<Set> minimal_hitting_sets(const std::vector<Set>& sets);

struct Partition {
  Set dplus, dminus, dzero;
  bool operator==(const Partition&) const = default;
};

Partition qpartition(std::span<const sd::Formula> query, const std::vector<Set>& diagnoses, const sd::Dpi& dpi);

/// Canonical q-partitions straight from the definition, deduplicated.
std::vector<Partition> canonical_qpartitions(const std::vector<Set>& diagnoses);

/// Entailed literals and positive binary implications over the instance's
/// atoms, normalized.
std::set<sd::Formula> ent_t(std::span<const sd::Formula> premises, const sd::Dpi& dpi);

/// ⊆-minimal subsets (as index sets into 0..n-1) satisfying `holds`.
std::vector<Set> minimal_subsets(std::size_t n, const std::function<bool(const Set&)>& holds);

template <class Tag>
Set to_set(const sd::IdSet<Tag>& ids) {
  auto v = ids.to_vector();
  return Set(v.begin(), v.end());
}

std::vector<Set> to_sets(std::span<const sd::FormulaIds> ids);
sd::FormulaIds from_set(const Set& s);
Partition from_qp(const sd::QPartition& qp);

}  // namespace oracle
