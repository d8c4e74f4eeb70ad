#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace sd {

// Tags keep sets over different universes from being mixed up.
struct FormulaTag {};
struct DiagnosisTag {};
struct PositionTag {};

/// Growable bitset over small non-negative indices. All binary operations
/// work word-parallel and tolerate operands of different widths.
template <class Tag>
class IdSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  IdSet() = default;
  IdSet(std::initializer_list<std::size_t> ids) {
    for (auto id : ids) insert(id);
  }

  static IdSet range(std::size_t n) {
    IdSet s;
    s.words_.assign((n + kWordBits - 1) / kWordBits, ~Word{0});
    if (n % kWordBits != 0) s.words_.back() = (Word{1} << (n % kWordBits)) - 1;
    s.trim();
    return s;
  }

  template <class Range>
  static IdSet from(const Range& ids) {
    IdSet s;
    for (auto id : ids) s.insert(static_cast<std::size_t>(id));
    return s;
  }

  void insert(std::size_t id) {
    std::size_t w = id / kWordBits;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= Word{1} << (id % kWordBits);
  }

  void erase(std::size_t id) {
    std::size_t w = id / kWordBits;
    if (w >= words_.size()) return;
    words_[w] &= ~(Word{1} << (id % kWordBits));
    trim();
  }

  bool contains(std::size_t id) const {
    std::size_t w = id / kWordBits;
    return w < words_.size() && ((words_[w] >> (id % kWordBits)) & 1U);
  }

  bool empty() const { return words_.empty(); }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  IdSet& operator|=(const IdSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  IdSet& operator&=(const IdSet& o) {
    if (words_.size() > o.words_.size()) words_.resize(o.words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    trim();
    return *this;
  }

  /// Set difference.
  IdSet& operator-=(const IdSet& o) {
    std::size_t n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i) words_[i] &= ~o.words_[i];
    trim();
    return *this;
  }

  friend IdSet operator|(IdSet a, const IdSet& b) { return a |= b; }
  friend IdSet operator&(IdSet a, const IdSet& b) { return a &= b; }
  friend IdSet operator-(IdSet a, const IdSet& b) { return a -= b; }

  bool intersects(const IdSet& o) const {
    std::size_t n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  bool is_subset_of(const IdSet& o) const {
    if (words_.size() > o.words_.size()) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool is_proper_subset_of(const IdSet& o) const { return is_subset_of(o) && *this != o; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        f(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> to_vector() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for_each([&](std::size_t id) { out.push_back(id); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  bool operator==(const IdSet& o) const = default;

  /// Lexicographic order on the ascending element sequences, so {1,2} < {1,3} < {2}.
  friend std::strong_ordering lex_compare(const IdSet& a, const IdSet& b) {
    std::size_t n = std::min(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      Word x = a.words_[i] ^ b.words_[i];
      if (x == 0) continue;
      Word low = x & (~x + 1);
      // The set owning the lowest differing element comes first unless the
      // other set has already run out of elements below it.
      Word below = low - 1;
      bool a_has = (a.words_[i] & low) != 0;
      const IdSet& other = a_has ? b : a;
      bool other_rest = (other.words_[i] & ~below & ~low) != 0 ||
                        std::any_of(other.words_.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                    other.words_.end(), [](Word w) { return w != 0; });
      if (!other_rest) return a_has ? std::strong_ordering::greater : std::strong_ordering::less;
      return a_has ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.words_.size() == b.words_.size()) return std::strong_ordering::equal;
    // Common words agree; the longer set has extra elements at the end.
    return a.words_.size() < b.words_.size() ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  friend bool lex_less(const IdSet& a, const IdSet& b) { return lex_compare(a, b) < 0; }

 private:
  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  std::vector<Word> words_;
};

using FormulaIds = IdSet<FormulaTag>;
using DiagnosisIds = IdSet<DiagnosisTag>;
using PositionIds = IdSet<PositionTag>;

struct IdSetHash {
  template <class Tag>
  std::size_t operator()(const IdSet<Tag>& s) const {
    return s.hash();
  }
};

}  // namespace sd
