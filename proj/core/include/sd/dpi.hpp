#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sd/formula.hpp"
#include "sd/id_set.hpp"

namespace sd {

class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quality requirements a solution KB must meet. Only consistency exists
/// for propositional logic.
enum class Requirement { Consistency };

struct TestCase {
  std::vector<Formula> formulas;  // conjunctive, non-empty
};

constexpr double kDefaultFaultProbability = 0.3;

/// Diagnosis problem instance <K, B, P, N>_R. Immutable once constructed;
/// answering a query yields a new instance sharing the atom table.
class Dpi {
 public:
  struct Parts {
    std::vector<Formula> kb;
    std::vector<Formula> background;
    std::vector<TestCase> positive;
    std::vector<TestCase> negative;
    std::vector<Requirement> requirements{Requirement::Consistency};
    std::vector<double> fault_probabilities;  // empty: default for every formula
  };

  /// Validates probabilities and the admissibility of B and P against N.
  Dpi(std::shared_ptr<AtomTable> atoms, Parts parts);

  const AtomTable& atoms() const { return *atoms_; }
  std::shared_ptr<AtomTable> shared_atoms() const { return atoms_; }

  std::span<const Formula> kb() const { return parts_.kb; }
  std::size_t kb_size() const { return parts_.kb.size(); }
  std::span<const Formula> background() const { return parts_.background; }
  std::span<const TestCase> positive() const { return parts_.positive; }
  std::span<const TestCase> negative() const { return parts_.negative; }
  std::span<const Requirement> requirements() const { return parts_.requirements; }
  bool has_explicit_probabilities() const { return explicit_probs_; }
  double fault_probability(std::size_t formula) const { return probs_.at(formula); }
  std::span<const double> fault_probabilities() const { return probs_; }

  /// B together with the union of all positive test cases.
  std::span<const Formula> fixed_part() const { return fixed_; }
  /// Atoms occurring anywhere in the instance, ascending by id.
  std::span<const AtomId> atom_ids() const { return atom_ids_; }

  FormulaIds all_formulas() const { return FormulaIds::range(kb_size()); }
  std::vector<Formula> select(const FormulaIds& ids) const;

  std::string formula_text(const Formula& f) const { return to_string(f, *atoms_); }

  Dpi with_positive(TestCase t) const;
  Dpi with_negative(TestCase t) const;
  Dpi with_kb_order(std::span<const std::size_t> permutation) const;

  const Parts& parts() const { return parts_; }

 private:
  std::shared_ptr<AtomTable> atoms_;
  Parts parts_;
  std::vector<double> probs_;
  bool explicit_probs_ = false;
  std::vector<Formula> fixed_;
  std::vector<AtomId> atom_ids_;
};

/// Parses the sectioned DPI text format.
Dpi parse_dpi(std::string_view text, std::shared_ptr<AtomTable> atoms = nullptr);
Dpi load_dpi(const std::filesystem::path& path);
std::string format_dpi(const Dpi& dpi);

/// S ∪ B ∪ U_P violates consistency or entails some negative test case.
bool is_faulty(std::span<const Formula> s, const Dpi& dpi);
bool is_faulty(const FormulaIds& subset, const Dpi& dpi);

/// S ∪ B is consistent, entails every positive and no negative test case.
bool is_solution_kb(std::span<const Formula> s, const Dpi& dpi);

/// (K \ D) ∪ U_P is a solution KB.
bool is_diagnosis(const FormulaIds& d, const Dpi& dpi);

/// Partition of the leading diagnoses by three disjoint index sets. A
/// q-partition additionally has non-empty dplus and dminus.
struct QPartition {
  DiagnosisIds dplus;
  DiagnosisIds dminus;
  DiagnosisIds dzero;

  bool is_query_partition() const { return !dplus.empty() && !dminus.empty(); }
  bool operator==(const QPartition&) const = default;
};

/// K*_i = (K \ D_i) ∪ U_P ∪ B.
std::vector<Formula> solution_kb(const FormulaIds& diagnosis, const Dpi& dpi);

/// Reasoner-based classification of each diagnosis against the answers to Q.
QPartition qpartition_of(std::span<const Formula> query, std::span<const FormulaIds> diagnoses, const Dpi& dpi);

/// Adds Q to P (true) or N (false).
Dpi apply_answer(const Dpi& dpi, std::span<const Formula> query, bool answer);

}  // namespace sd
