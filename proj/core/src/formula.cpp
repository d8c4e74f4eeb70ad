#include "sd/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>

namespace sd {

AtomId AtomTable::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return AtomId{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return AtomId{id};
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Formula Formula::make(Connective k, AtomId atom, std::vector<Formula> ops) {
  std::size_t h = mix(static_cast<std::size_t>(k) * 1315423911U, atom.value);
  for (const auto& op : ops) h = mix(h, op.hash());
  return Formula(std::make_shared<const Node>(Node{k, atom, std::move(ops), h}));
}

Formula Formula::atom(AtomId id) { return make(Connective::Atom, id, {}); }

Formula Formula::negation(Formula f) { return make(Connective::Not, {}, {std::move(f)}); }

Formula Formula::conjunction(std::vector<Formula> operands) {
  if (operands.size() == 1) return operands.front();
  if (operands.empty()) throw std::invalid_argument("conjunction needs operands");
  return make(Connective::And, {}, std::move(operands));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  if (operands.size() == 1) return operands.front();
  if (operands.empty()) throw std::invalid_argument("disjunction needs operands");
  return make(Connective::Or, {}, std::move(operands));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return make(Connective::Implies, {}, {std::move(lhs), std::move(rhs)});
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return make(Connective::Iff, {}, {std::move(lhs), std::move(rhs)});
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.atom_id() != b.atom_id()) return false;
  auto x = a.operands();
  auto y = b.operands();
  return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.atom_id() <=> b.atom_id(); c != 0) return c;
  auto x = a.operands();
  auto y = b.operands();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, AtomTable& atoms, int line) : text_(text), atoms_(atoms), line_(line) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  Formula parse_iff() {
    Formula lhs = parse_impl();
    if (accept("<->")) return Formula::equivalence(std::move(lhs), parse_iff());
    return lhs;
  }

  Formula parse_impl() {
    Formula lhs = parse_or();
    if (accept("->")) return Formula::implication(std::move(lhs), parse_impl());
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> ops{parse_and()};
    while (accept("|")) ops.push_back(parse_and());
    return Formula::disjunction(std::move(ops));
  }

  Formula parse_and() {
    std::vector<Formula> ops{parse_unary()};
    while (accept("&")) ops.push_back(parse_unary());
    return Formula::conjunction(std::move(ops));
  }

  Formula parse_unary() {
    skip_space();
    if (accept("!")) return Formula::negation(parse_unary());
    if (accept("(")) {
      Formula f = parse_iff();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return Formula::atom(atoms_.intern(text_.substr(start, pos_ - start)));
    }
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = line_;
    int col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  std::string_view text_;
  AtomTable& atoms_;
  int line_;
  std::size_t pos_ = 0;
};

int precedence(Connective k) {
  switch (k) {
    case Connective::Iff: return 1;
    case Connective::Implies: return 2;
    case Connective::Or: return 3;
    case Connective::And: return 4;
    case Connective::Not: return 5;
    case Connective::Atom: return 6;
  }
  return 0;
}

void print(const Formula& f, const AtomTable& atoms, std::string& out);

void print_operand(const Formula& child, Connective parent, bool right_of_assoc, const AtomTable& atoms,
                   std::string& out) {
  int pc = precedence(parent);
  int cc = precedence(child.kind());
  bool parens = cc < pc;
  if (cc == pc) {
    // Same-connective children of n-ary operators would be flattened on
    // re-parse; left operands of right-associative ones would regroup.
    parens = (parent == Connective::And || parent == Connective::Or) || !right_of_assoc;
    if (parent == Connective::Not) parens = false;
  }
  if (parens) out += '(';
  print(child, atoms, out);
  if (parens) out += ')';
}

void print(const Formula& f, const AtomTable& atoms, std::string& out) {
  auto ops = f.operands();
  switch (f.kind()) {
    case Connective::Atom:
      out += atoms.name(f.atom_id());
      return;
    case Connective::Not:
      out += '!';
      print_operand(ops[0], Connective::Not, true, atoms, out);
      return;
    case Connective::And:
    case Connective::Or: {
      const char* sep = f.kind() == Connective::And ? " & " : " | ";
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) out += sep;
        print_operand(ops[i], f.kind(), false, atoms, out);
      }
      return;
    }
    case Connective::Implies:
    case Connective::Iff:
      print_operand(ops[0], f.kind(), false, atoms, out);
      out += f.kind() == Connective::Implies ? " -> " : " <-> ";
      print_operand(ops[1], f.kind(), true, atoms, out);
      return;
  }
}

void flatten_into(const Formula& f, Connective k, std::vector<Formula>& out) {
  if (f.kind() == k) {
    for (const auto& op : f.operands()) flatten_into(op, k, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

Formula parse_formula(std::string_view text, AtomTable& atoms, int line) {
  return Parser(text, atoms, line).parse();
}

std::string to_string(const Formula& f, const AtomTable& atoms) {
  std::string out;
  print(f, atoms, out);
  return out;
}

Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom:
      return f;
    case Connective::Not:
      return Formula::negation(normalize(f.operands()[0]));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> flat;
      for (const auto& op : f.operands()) flatten_into(normalize(op), f.kind(), flat);
      std::sort(flat.begin(), flat.end());
      return f.kind() == Connective::And ? Formula::conjunction(std::move(flat))
                                         : Formula::disjunction(std::move(flat));
    }
    case Connective::Implies:
      return Formula::implication(normalize(f.operands()[0]), normalize(f.operands()[1]));
    case Connective::Iff: {
      Formula a = normalize(f.operands()[0]);
      Formula b = normalize(f.operands()[1]);
      if (b < a) std::swap(a, b);
      return Formula::equivalence(std::move(a), std::move(b));
    }
  }
  return f;
}

void collect_atoms(const Formula& f, std::vector<AtomId>& out) {
  if (f.kind() == Connective::Atom) {
    auto it = std::lower_bound(out.begin(), out.end(), f.atom_id());
    if (it == out.end() || *it != f.atom_id()) out.insert(it, f.atom_id());
    return;
  }
  for (const auto& op : f.operands()) collect_atoms(op, out);
}

bool evaluate(const Formula& f, const std::vector<bool>& assignment) {
  auto ops = f.operands();
  switch (f.kind()) {
    case Connective::Atom:
      return assignment.at(f.atom_id().value);
    case Connective::Not:
      return !evaluate(ops[0], assignment);
    case Connective::And:
      return std::all_of(ops.begin(), ops.end(), [&](const Formula& g) { return evaluate(g, assignment); });
    case Connective::Or:
      return std::any_of(ops.begin(), ops.end(), [&](const Formula& g) { return evaluate(g, assignment); });
    case Connective::Implies:
      return !evaluate(ops[0], assignment) || evaluate(ops[1], assignment);
    case Connective::Iff:
      return evaluate(ops[0], assignment) == evaluate(ops[1], assignment);
  }
  return false;
}

}  // namespace sd
