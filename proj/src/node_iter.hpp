#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "amod/grid.hpp"

namespace amod::detail {

/// Visit every frequency node of `g` inside the closed box [lo, hi], clipped
/// to the grid. fn(flat_index, xi).
template <class Fn>
void for_each_node_in_box(const GridSpec& g, std::span<const double> lo, std::span<const double> hi, Fn&& fn) {
  const int n = g.samples;
  const double d = g.freq_step();
  std::vector<int> first(g.dim), last(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    first[a] = std::max(-n / 2, static_cast<int>(std::ceil(lo[a] / d)));
    last[a] = std::min(n / 2 - 1, static_cast<int>(std::floor(hi[a] / d)));
    if (first[a] > last[a]) return;
  }
  std::vector<int> m = first;
  std::vector<double> xi(g.dim);
  while (true) {
    std::size_t flat = 0;
    for (int a = 0; a < g.dim; ++a) {
      flat = flat * n + static_cast<std::size_t>(m[a] + n / 2);
      xi[a] = m[a] * d;
    }
    fn(flat, std::span<const double>(xi));
    int a = g.dim - 1;
    while (a >= 0 && ++m[a] > last[a]) {
      m[a] = first[a];
      --a;
    }
    if (a < 0) break;
  }
}

}  // namespace amod::detail
