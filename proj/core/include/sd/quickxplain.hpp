#pragma once

#include <optional>
#include <span>
#include <vector>

namespace sd {

/// Junker's QuickXPlain over a monotone predicate `holds` (if it holds for a
/// set it holds for every superset). Returns a ⊆-minimal subset of `items`
/// for which the predicate holds, preferring items that occur earlier, or
/// nullopt if it does not hold for all of `items`.
///
/// `holds` receives the candidate subset as a vector in input order.
template <class T, class Pred>
std::optional<std::vector<T>> quick_xplain(std::span<const T> items, Pred&& holds) {
  std::vector<T> all(items.begin(), items.end());
  if (!holds(all)) return std::nullopt;
  if (all.empty()) return all;

  auto join = [](const std::vector<T>& a, std::span<const T> b) {
    std::vector<T> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };

  auto rec = [&](auto&& self, const std::vector<T>& background, bool delta_nonempty,
                 std::span<const T> c) -> std::vector<T> {
    if (delta_nonempty && holds(background)) return {};
    if (c.size() == 1) return {c[0]};
    std::size_t k = c.size() / 2;
    auto c1 = c.first(k);
    auto c2 = c.subspan(k);
    std::vector<T> d2 = self(self, join(background, c1), !c1.empty(), c2);
    std::vector<T> d1 = self(self, join(background, d2), !d2.empty(), c1);
    d1.insert(d1.end(), d2.begin(), d2.end());
    return d1;
  };
  return rec(rec, std::vector<T>{}, false, std::span<const T>(all));
}

}  // namespace sd
