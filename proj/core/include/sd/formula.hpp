#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sd {

struct AtomId {
  std::uint32_t value = 0;
  auto operator<=>(const AtomId&) const = default;
};

/// Interned propositional variables. Ids are dense and assigned in order of
/// first declaration; the table only ever grows.
class AtomTable {
 public:
  AtomId intern(std::string_view name);
  const std::string& name(AtomId id) const { return names_.at(id.value); }
  std::size_t size() const { return names_.size(); }
  bool contains(std::string_view name) const { return index_.count(std::string(name)) != 0; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

enum class Connective : std::uint8_t { Atom, Not, And, Or, Implies, Iff };

/// Immutable propositional formula. Copies share structure. And/Or are
/// n-ary with at least two operands; Implies/Iff are binary.
class Formula {
 public:
  static Formula atom(AtomId id);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);

  Connective kind() const { return node_->kind; }
  AtomId atom_id() const { return node_->atom; }
  std::span<const Formula> operands() const { return node_->operands; }
  std::size_t hash() const { return node_->hash; }

  /// Stable address of the shared node; equal for copies of one value.
  const void* identity() const { return node_.get(); }

  bool is_literal() const {
    return kind() == Connective::Atom ||
           (kind() == Connective::Not && operands()[0].kind() == Connective::Atom);
  }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Connective kind;
    AtomId atom;
    std::vector<Formula> operands;
    std::size_t hash;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Connective k, AtomId atom, std::vector<Formula> ops);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses one formula. Unknown identifiers are declared in `atoms`.
/// `line` offsets reported positions when the text is part of a larger file.
Formula parse_formula(std::string_view text, AtomTable& atoms, int line = 1);

/// ASCII rendering that parses back to a structurally equal formula.
std::string to_string(const Formula& f, const AtomTable& atoms);

/// Flattens nested And/Or and sorts operands of the commutative connectives,
/// so that formulas equal up to those rewrites compare equal.
Formula normalize(const Formula& f);

/// Atoms occurring in `f`, appended to `out` without duplicates, ascending.
void collect_atoms(const Formula& f, std::vector<AtomId>& out);

/// Evaluates under an assignment indexed by atom id.
bool evaluate(const Formula& f, const std::vector<bool>& assignment);

}  // namespace sd
