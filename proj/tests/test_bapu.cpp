#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "amod/bapu.hpp"
#include "amod/errors.hpp"

using namespace amod;

namespace {

BapuFamily calibrated(double alpha, const GridSpec& g) {
  CoveringParams p;
  p.alpha = alpha;
  return build_bapu(make_covering(p, g));
}

// Windows whose neighbourhood is a full translate pattern (alpha = 0 only).
std::vector<std::size_t> translation_windows(const BapuFamily& b, int lo, int margin) {
  int kmax = 0;
  for (std::size_t w = 0; w < b.size(); ++w) kmax = std::max(kmax, std::abs(b.patch(w).index[0]));
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < b.size(); ++w) {
    const int k = std::abs(b.patch(w).index[0]);
    if (k >= lo && k <= kmax - margin) out.push_back(w);
  }
  return out;
}

GridSpec prop_grid() { return GridSpec(1, 16.0, 4096); }

}  // namespace

TEST_CASE("partition of unity on covered nodes") {
  for (auto g : {GridSpec(1, 16.0, 256), GridSpec(2, 12.0, 128)}) {
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 0.8, 1.0}) {
      auto b = calibrated(alpha, g);
      CHECK(partition_sum(b) <= 1e-12);
      for (const auto& w : b.windows()) {
        const auto& q = b.patch(&w - b.windows().data());
        std::vector<double> xi(g.dim);
        for (std::size_t i = 0; i < w.nodes.size(); ++i) {
          CHECK(w.values[i] >= 0.0);
          CHECK(w.values[i] <= 1.0 + 1e-15);
          g.frequency(w.nodes[i], xi);
          CHECK(q.contains(xi));
        }
      }
    }
  }
}

TEST_CASE("zeroing a window breaks the partition") {
  GridSpec g(1, 16.0, 256);
  auto b = calibrated(0.5, g);
  const std::size_t w = b.size() / 2 + 2;
  const double dev = partition_sum(b.without(w));
  CHECK(dev > 0.1);
  CHECK(dev == doctest::Approx(b.windows()[w].max_value()).epsilon(1e-12));
}

TEST_CASE("closed form agrees with the sampled windows") {
  GridSpec g(2, 12.0, 128);
  auto b = calibrated(0.5, g);
  std::vector<double> xi(2);
  double err = 0.0;
  for (std::size_t w = 0; w < b.size(); ++w) {
    const auto& win = b.windows()[w];
    for (std::size_t i = 0; i < win.nodes.size(); ++i) {
      g.frequency(win.nodes[i], xi);
      err = std::max(err, std::abs(b.evaluate(w, xi) - win.values[i]));
    }
  }
  CHECK(err <= 1e-14);
}

TEST_CASE("window equals one at an isolated center") {
  // frequency step 1/8 so integer centres are nodes; neighbours at distance 1 > 0.75 vanish there
  GridSpec g(1, 8.0 * kPi, 256);
  CoveringParams p;
  p.alpha = 0.0;
  p.radius_factor = 0.75;
  p.delta = 0.0;
  auto b = build_bapu(build_covering(p, g));
  for (std::size_t w = 0; w < b.size(); ++w) {
    std::vector<int> m = {static_cast<int>(std::lround(b.patch(w).center[0] / g.freq_step()))};
    const std::size_t node = g.frequency_index(m);
    const auto& win = b.windows()[w];
    auto it = std::find(win.nodes.begin(), win.nodes.end(), node);
    REQUIRE(it != win.nodes.end());
    CHECK(win.values[it - win.nodes.begin()] == 1.0);
  }
}

TEST_CASE("insufficient radius is rejected") {
  GridSpec g(1, 16.0, 256);
  CoveringParams p;
  p.alpha = 0.5;
  p.radius_factor = 0.1;
  CHECK_THROWS_AS(build_bapu(build_covering(p, g)), GuardViolation);
}

TEST_CASE("derivative bounds") {
  SUBCASE("alpha = 0 windows are translates") {
    auto b = calibrated(0.0, GridSpec(1, 16.0, 256));
    DerivativeCheckOptions opt;
    opt.windows = translation_windows(b, 3, 3);
    REQUIRE(opt.windows.size() >= 4);
    auto rep = derivative_bound_check(b, opt);
    for (int ord = 0; ord <= 2; ++ord) {
      double lo = 1e300, hi = 0.0;
      for (const auto& r : rep.rows)
        if (r.order[0] == ord) {
          lo = std::min(lo, r.value);
          hi = std::max(hi, r.value);
        }
      CHECK(hi - lo <= 1e-6 * hi);
    }
  }
  SUBCASE("alpha = 0.5 constants are uniform in k") {
    auto b = calibrated(0.5, prop_grid());
    DerivativeCheckOptions opt;
    for (std::size_t w = 0; w < b.size(); ++w) {
      const int k = b.patch(w).index[0];
      if (k >= 1 && k <= 16) opt.windows.push_back(w);
    }
    REQUIRE(opt.windows.size() == 16);
    auto rep = derivative_bound_check(b, opt);
    CHECK(rep.passed());
    for (const auto& r : rep.rows)
      if (r.order[0] == 0) CHECK(r.value <= 1.0 + 1e-15);
  }
}

TEST_CASE("rescaled windows") {
  auto b = calibrated(0.5, prop_grid());
  auto rep = rescaled_window_check(b);
  CHECK(rep.derivatives.passed());
  REQUIRE(rep.support_radius.size() >= 8);
  // support extent approaches A as k grows
  const double A = b.covering().radius_factor;
  const double last = rep.support_radius.back();
  CHECK(std::abs(last - A) <= 0.1 * A);
  CHECK(rep.common_radius <= 2.0 * A);

  auto b0 = calibrated(0.0, GridSpec(1, 16.0, 256));
  DerivativeCheckOptions opt;
  opt.windows = translation_windows(b0, 3, 3);
  auto r0 = rescaled_window_check(b0, opt);
  for (const auto& r : r0.derivatives.rows) {
    for (const auto& s : r0.derivatives.rows)
      if (s.order == r.order) CHECK(std::abs(s.value - r.value) <= 1e-9 * std::max(1.0, r.value));
  }
}

TEST_CASE("dilated window decay") {
  auto b = calibrated(0.5, prop_grid());
  DecayCheckOptions opt;
  opt.m_values = {1, 2, 4};
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b.patch(w).interior && b.patch(w).index[0] > 0) opt.windows.push_back(w);
  auto rep = dilated_window_decay_check(b, opt);
  CHECK(rep.constants.passed());

  double c1 = 0.0, c8 = 0.0;
  for (const auto& r : rep.constants.rows) {
    if (r.order[0] != 4) continue;
    const int k = b.patch(r.window).index[0];
    if (k == 1) c1 = r.value;
    if (k == 8) c8 = r.value;
  }
  REQUIRE(c1 > 0.0);
  REQUIRE(c8 > 0.0);
  CHECK(std::max(c1 / c8, c8 / c1) <= 4.0);

  for (std::size_t i = 0; i < rep.mu_hat_zero.size(); ++i)
    CHECK(rep.mu_hat_zero[i] == doctest::Approx(rep.mu_hat_zero_quadrature[i]).epsilon(1e-3));
}

TEST_CASE("norm condition") {
  SUBCASE("p = (1) reduces to the L1 norm of the inverse transform") {
    auto b = calibrated(0.5, GridSpec(1, 16.0, 256));
    auto rep = bapu_norm_condition(b, MixedExponents{1.0});
    for (const auto& r : rep.rows) {
      CHECK(r.chi_norm == doctest::Approx(b.patch(r.window).measure()).epsilon(1e-14));
      CHECK(r.value == doctest::Approx(r.inverse_norm).epsilon(1e-14));
      CHECK(r.tail_fraction <= 1e-6);
    }
    CHECK(rep.worst_factor <= 4.0);
  }
  SUBCASE("alpha = 0 translates give identical values") {
    auto b = calibrated(0.0, GridSpec(1, 16.0, 256));
    NormConditionOptions opt;
    opt.windows = translation_windows(b, 3, 3);
    auto rep = bapu_norm_condition(b, MixedExponents{1.0}, opt);
    CHECK((rep.sup - rep.median) <= 1e-6 * rep.sup);
    for (const auto& r : rep.rows) CHECK(std::abs(r.value - rep.median) <= 1e-6 * rep.median);
  }
  SUBCASE("2D mixed exponents") {
    auto b = calibrated(0.5, GridSpec(2, 12.0, 128));
    auto reps = bapu_norm_condition(b, std::vector<MixedExponents>{{1.0, 1.0}, {0.5, 2.0}});
    for (const auto& rep : reps) {
      CHECK(rep.rows.size() > 4);
      CHECK(rep.worst_factor <= 4.0);
    }
    for (const auto& r : reps[0].rows) CHECK(r.value == doctest::Approx(r.inverse_norm).epsilon(1e-13));
  }
}
