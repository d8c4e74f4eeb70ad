#include "sd/dpi.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "sd/reasoner.hpp"

namespace sd {

Dpi::Dpi(std::shared_ptr<AtomTable> atoms, Parts parts) : atoms_(std::move(atoms)), parts_(std::move(parts)) {
  if (!atoms_) throw std::invalid_argument("DPI requires an atom table");
  if (parts_.requirements.empty()) parts_.requirements.push_back(Requirement::Consistency);

  explicit_probs_ = !parts_.fault_probabilities.empty();
  if (explicit_probs_ && parts_.fault_probabilities.size() != parts_.kb.size())
    throw std::invalid_argument("fault probabilities must cover every KB formula");
  probs_ = explicit_probs_ ? parts_.fault_probabilities : std::vector<double>(parts_.kb.size(), kDefaultFaultProbability);
  for (double p : probs_)
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("fault probabilities must lie in (0,1)");

  fixed_ = parts_.background;
  for (const auto& t : parts_.positive) {
    if (t.formulas.empty()) throw std::invalid_argument("positive test case is empty");
    fixed_.insert(fixed_.end(), t.formulas.begin(), t.formulas.end());
  }
  for (const auto& t : parts_.negative)
    if (t.formulas.empty()) throw std::invalid_argument("negative test case is empty");

  auto collect = [&](std::span<const Formula> fs) {
    for (const auto& f : fs) collect_atoms(f, atom_ids_);
  };
  collect(parts_.kb);
  collect(fixed_);
  for (const auto& t : parts_.negative) collect(t.formulas);

  if (is_faulty(std::span<const Formula>{}, *this))
    throw AdmissibilityError("background + positive test cases already faulty");
}

std::vector<Formula> Dpi::select(const FormulaIds& ids) const {
  std::vector<Formula> out;
  out.reserve(ids.size());
  ids.for_each([&](std::size_t i) { out.push_back(parts_.kb.at(i)); });
  return out;
}

Dpi Dpi::with_positive(TestCase t) const {
  Parts p = parts_;
  p.positive.push_back(std::move(t));
  return Dpi(atoms_, std::move(p));
}

Dpi Dpi::with_negative(TestCase t) const {
  Parts p = parts_;
  p.negative.push_back(std::move(t));
  return Dpi(atoms_, std::move(p));
}

Dpi Dpi::with_kb_order(std::span<const std::size_t> permutation) const {
  if (permutation.size() != kb_size()) throw std::invalid_argument("permutation size mismatch");
  Parts p = parts_;
  p.kb.clear();
  p.fault_probabilities.clear();
  for (std::size_t i : permutation) {
    p.kb.push_back(parts_.kb.at(i));
    if (explicit_probs_) p.fault_probabilities.push_back(probs_.at(i));
  }
  return Dpi(atoms_, std::move(p));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

enum class Section { None, Requirements, Kb, Background, Positive, Negative, Probs };

constexpr std::pair<std::string_view, Section> kSections[] = {
    {"[REQUIREMENTS]", Section::Requirements}, {"[KB]", Section::Kb},
    {"[BACKGROUND]", Section::Background},     {"[POSITIVE]", Section::Positive},
    {"[NEGATIVE]", Section::Negative},         {"[PROBS]", Section::Probs},
};

}  // namespace

Dpi parse_dpi(std::string_view text, std::shared_ptr<AtomTable> atoms) {
  if (!atoms) atoms = std::make_shared<AtomTable>();
  Dpi::Parts parts;
  parts.requirements.clear();
  std::vector<std::tuple<std::size_t, double, int>> probs;  // index, value, line

  Section current = Section::None;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      auto it = std::find_if(std::begin(kSections), std::end(kSections),
                             [&](const auto& s) { return s.first == line; });
      if (it == std::end(kSections)) throw ParseError("unknown section header " + std::string(line), line_no, 1);
      if (it->second <= current) throw ParseError("section " + std::string(line) + " out of order", line_no, 1);
      // The first three sections are mandatory and consecutive.
      bool skips_required = current < Section::Background &&
                            static_cast<int>(it->second) != static_cast<int>(current) + 1;
      if (skips_required)
        throw ParseError("sections [REQUIREMENTS], [KB] and [BACKGROUND] are required", line_no, 1);
      current = it->second;
      continue;
    }

    switch (current) {
      case Section::None:
        throw ParseError("content before first section header", line_no, 1);
      case Section::Requirements:
        if (line != "consistency") throw ParseError("unsupported requirement " + std::string(line), line_no, 1);
        parts.requirements.push_back(Requirement::Consistency);
        break;
      case Section::Kb:
        parts.kb.push_back(parse_formula(line, *atoms, line_no));
        break;
      case Section::Background:
        parts.background.push_back(parse_formula(line, *atoms, line_no));
        break;
      case Section::Positive:
      case Section::Negative: {
        TestCase t;
        std::size_t start = 0;
        while (start <= line.size()) {
          auto semi = line.find(';', start);
          if (semi == std::string_view::npos) semi = line.size();
          auto piece = trim(line.substr(start, semi - start));
          if (!piece.empty()) t.formulas.push_back(parse_formula(piece, *atoms, line_no));
          start = semi + 1;
        }
        if (t.formulas.empty()) throw ParseError("empty test case", line_no, 1);
        (current == Section::Positive ? parts.positive : parts.negative).push_back(std::move(t));
        break;
      }
      case Section::Probs: {
        auto colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("expected '<index>: <probability>'", line_no, 1);
        auto idx_text = trim(line.substr(0, colon));
        auto val_text = std::string(trim(line.substr(colon + 1)));
        std::size_t idx = 0;
        auto [p, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
        if (ec != std::errc() || p != idx_text.data() + idx_text.size())
          throw ParseError("bad formula index", line_no, 1);
        double value = 0;
        try {
          std::size_t used = 0;
          value = std::stod(val_text, &used);
          if (used != val_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ParseError("bad probability", line_no, static_cast<int>(colon) + 2);
        }
        probs.emplace_back(idx, value, line_no);
        break;
      }
    }
  }
  if (current < Section::Background)
    throw ParseError("sections [REQUIREMENTS], [KB] and [BACKGROUND] are required", line_no, 1);
  if (parts.requirements.empty()) parts.requirements.push_back(Requirement::Consistency);

  if (!probs.empty()) {
    parts.fault_probabilities.assign(parts.kb.size(), kDefaultFaultProbability);
    for (auto [idx, value, line] : probs) {
      if (idx < 1 || idx > parts.kb.size()) throw ParseError("probability for unknown formula " + std::to_string(idx), line, 1);
      if (!(value > 0.0 && value < 1.0))
        throw std::invalid_argument("probability of formula " + std::to_string(idx) + " outside (0,1)");
      parts.fault_probabilities[idx - 1] = value;
    }
  }
  return Dpi(std::move(atoms), std::move(parts));
}

Dpi load_dpi(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dpi(ss.str());
}

std::string format_dpi(const Dpi& dpi) {
  std::ostringstream out;
  out << "[REQUIREMENTS]\nconsistency\n[KB]\n";
  for (const auto& f : dpi.kb()) out << dpi.formula_text(f) << '\n';
  out << "[BACKGROUND]\n";
  for (const auto& f : dpi.background()) out << dpi.formula_text(f) << '\n';
  auto cases = [&](std::span<const TestCase> ts) {
    for (const auto& t : ts) {
      for (std::size_t i = 0; i < t.formulas.size(); ++i)
        out << (i ? "; " : "") << dpi.formula_text(t.formulas[i]);
      out << '\n';
    }
  };
  out << "[POSITIVE]\n";
  cases(dpi.positive());
  out << "[NEGATIVE]\n";
  cases(dpi.negative());
  if (dpi.has_explicit_probabilities()) {
    out << "[PROBS]\n";
    for (std::size_t i = 0; i < dpi.kb_size(); ++i) out << i + 1 << ": " << dpi.fault_probability(i) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Judgments

bool is_faulty(std::span<const Formula> s, const Dpi& dpi) {
  Reasoner r(s);
  r.add(dpi.fixed_part());
  if (!r.consistent()) return true;
  for (const auto& n : dpi.negative())
    if (r.entails(n.formulas)) return true;
  return false;
}

bool is_faulty(const FormulaIds& subset, const Dpi& dpi) {
  auto s = dpi.select(subset);
  return is_faulty(s, dpi);
}

bool is_solution_kb(std::span<const Formula> s, const Dpi& dpi) {
  Reasoner r(s);
  r.add(dpi.background());
  if (!r.consistent()) return false;
  for (const auto& p : dpi.positive())
    if (!r.entails(p.formulas)) return false;
  for (const auto& n : dpi.negative())
    if (r.entails(n.formulas)) return false;
  return true;
}

bool is_diagnosis(const FormulaIds& d, const Dpi& dpi) {
  auto kept = dpi.select(dpi.all_formulas() - d);
  for (const auto& t : dpi.positive()) kept.insert(kept.end(), t.formulas.begin(), t.formulas.end());
  return is_solution_kb(kept, dpi);
}

std::vector<Formula> solution_kb(const FormulaIds& diagnosis, const Dpi& dpi) {
  auto kb = dpi.select(dpi.all_formulas() - diagnosis);
  kb.insert(kb.end(), dpi.fixed_part().begin(), dpi.fixed_part().end());
  return kb;
}

QPartition qpartition_of(std::span<const Formula> query, std::span<const FormulaIds> diagnoses, const Dpi& dpi) {
  if (query.empty()) throw std::invalid_argument("query must not be empty");
  QPartition qp;
  for (std::size_t i = 0; i < diagnoses.size(); ++i) {
    Reasoner r(solution_kb(diagnoses[i], dpi));
    if (r.entails(query)) {
      qp.dplus.insert(i);
      continue;
    }
    r.add(query);
    bool violated = !r.consistent();
    for (std::size_t k = 0; !violated && k < dpi.negative().size(); ++k)
      violated = r.entails(dpi.negative()[k].formulas);
    (violated ? qp.dminus : qp.dzero).insert(i);
  }
  return qp;
}

Dpi apply_answer(const Dpi& dpi, std::span<const Formula> query, bool answer) {
  if (query.empty()) throw std::invalid_argument("query must not be empty");
  TestCase t{std::vector<Formula>(query.begin(), query.end())};
  return answer ? dpi.with_positive(std::move(t)) : dpi.with_negative(std::move(t));
}

}  // namespace sd
