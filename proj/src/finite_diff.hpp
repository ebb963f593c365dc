#pragma once

#include <span>
#include <vector>

namespace amod::detail {

/// Mixed partial derivative by nested central differences.
/// `order[a]` is the derivative order along coordinate a, `steps[a]` its step.
template <class F>
auto nested_central(const F& f, std::vector<double> point, std::vector<int> order,
                    std::span<const double> steps) -> decltype(f(std::span<const double>(point))) {
  std::size_t axis = 0;
  while (axis < order.size() && order[axis] == 0) ++axis;
  if (axis == order.size()) return f(std::span<const double>(point));

  --order[axis];
  const double h = steps[axis];
  const double x0 = point[axis];
  point[axis] = x0 + h;
  const auto up = nested_central(f, point, order, steps);
  point[axis] = x0 - h;
  const auto down = nested_central(f, point, order, steps);
  return (up - down) / (2.0 * h);
}

/// All multi-indices of length `dim` with total order <= max_order, ordered by
/// total order then lexicographically.
inline std::vector<std::vector<int>> multi_indices(int dim, int max_order) {
  std::vector<std::vector<int>> out;
  for (int total = 0; total <= max_order; ++total) {
    std::vector<int> m(dim, 0);
    // enumerate compositions of `total` into `dim` parts
    auto rec = [&](auto&& self, int axis, int left) -> void {
      if (axis == dim - 1) {
        m[axis] = left;
        out.push_back(m);
        return;
      }
      for (int v = left; v >= 0; --v) {
        m[axis] = v;
        self(self, axis + 1, left - v);
      }
    };
    rec(rec, 0, total);
  }
  return out;
}

inline int order_of(std::span<const int> m) {
  int s = 0;
  for (int v : m) s += v;
  return s;
}

}  // namespace amod::detail
