#pragma once

#include <vector>

namespace qopt::detail {

/// Calls f(k) for every k of length `parts` with entries >= 0 summing to
/// `degree`, in descending lexicographic order.
template <class F>
void for_each_composition(std::size_t parts, int degree, F&& f) {
  std::vector<int> k(parts, 0);
  auto rec = [&](auto&& self, std::size_t pos, int rem) -> void {
    if (pos + 1 == parts) {
      k[pos] = rem;
      f(static_cast<const std::vector<int>&>(k));
      return;
    }
    for (int v = rem; v >= 0; --v) {
      k[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  if (parts > 0) rec(rec, 0, degree);
}

}  // namespace qopt::detail
