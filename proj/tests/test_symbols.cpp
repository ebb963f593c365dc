#include "doctest.h"

#include <cmath>

#include "amod/errors.hpp"
#include "amod/symbols.hpp"

using namespace amod;

namespace {

SymbolLattice lattice1() {
  SymbolLattice lat;
  lat.grid = GridSpec(1, 16.0, 256);
  return lat;
}

SymbolLattice lattice2() {
  SymbolLattice lat;
  lat.grid = GridSpec(2, 12.0, 128);
  lat.points_per_decade = 10;
  return lat;
}

}  // namespace

TEST_CASE("lattice layout") {
  auto lat = lattice1();
  auto r = lat.radii();
  CHECK(r.front() == 1.0);
  CHECK(r.back() == doctest::Approx(10.0 * lat.grid.nyquist()));
  auto wide = lat;
  wide.range_factor = 100.0;
  auto rw = wide.radii();
  for (double v : r) {
    bool found = false;
    for (double w : rw) found = found || std::abs(v - w) <= 1e-12 * v;
    CHECK(found);
  }
  CHECK(lattice2().directions().size() == 16);
  SymbolLattice l3;
  l3.grid = GridSpec(3, 4.0, 16);
  CHECK(l3.directions().size() == 26);
  CHECK(lattice2().x_points_list().size() == 64);
}

TEST_CASE("catalog values") {
  std::vector<double> x1 = {0.3}, xi1 = {2.0};
  CHECK(catalog::bessel(1, 0.0)(x1, xi1) == cplx(1.0));
  CHECK(catalog::identity(1)(x1, xi1) == cplx(1.0));
  CHECK(std::abs(catalog::bessel(1, 3.0)(x1, xi1) - std::pow(5.0, 1.5)) <= 1e-12);

  std::vector<double> x3(3, 0.0), z = {1.0, 1.0, 0.0};
  CHECK(catalog::heat(3)(x3, z) == cplx(1.0, 1.0));
  std::vector<double> x2(2, 0.0), z2 = {1.0, 1.0};
  CHECK(std::abs(catalog::heat_parametrix(2, 0.5)(x2, z2) - 1.0 / cplx(1.0, 1.0)) <= 1e-15);
  std::vector<double> zero2(2, 0.0);
  CHECK(catalog::heat_parametrix(2)(x2, zero2) == cplx(0.0));

  CHECK_THROWS_AS(catalog::by_name("nonsense", 1, {}), ConfigError);
  CHECK_THROWS_AS(catalog::by_name("bessel", 1, {{"b", "two"}}), ConfigError);
  CHECK(catalog::by_name("modulated", 2, {{"rho", "0.5"}}).kind == SymbolKind::Separable);
  CHECK(catalog::by_name("bessel", 2, {{"b", "2"}}).order == 2.0);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (double b : {-1.0, 2.0, 3.5}) {
    auto s = catalog::bessel(2, b);
    auto fd = s;
    fd.derivative = nullptr;
    std::vector<double> x = {0.0, 0.0};
    for (auto xi : {std::vector<double>{0.3, -1.2}, std::vector<double>{5.0, 2.0}, std::vector<double>{-40.0, 3.0}}) {
      for (auto al : {std::vector<int>{1, 0}, std::vector<int>{0, 1}, std::vector<int>{2, 0}, std::vector<int>{1, 1}}) {
        std::vector<int> be = {0, 0};
        const cplx a = s.partial(al, be, x, xi), f = fd.partial(al, be, x, xi);
        CHECK(std::abs(a - f) <= 1e-5 * std::max(1.0, std::abs(a)));
      }
    }
  }
  auto h = catalog::heat(2);
  auto hf = h;
  hf.derivative = nullptr;
  std::vector<double> x = {0.0, 0.0}, z = {3.0, -2.0};
  for (auto al : {std::vector<int>{1, 0}, std::vector<int>{0, 1}, std::vector<int>{0, 2}, std::vector<int>{1, 1}}) {
    std::vector<int> be = {0, 0};
    CHECK(std::abs(h.partial(al, be, x, z) - hf.partial(al, be, x, z)) <= 1e-6);
  }
}

TEST_CASE("seminorm of trivial symbols") {
  auto lat = lattice1();
  for (int N : {0, 1, 2})
    for (int M : {0, 1, 2}) CHECK(seminorm_estimate(catalog::identity(1), N, M, lat).value == 1.0);
  for (double b : {-2.0, 1.0, 2.0}) {
    auto e = seminorm_estimate(catalog::bessel(1, b), 0, 0, lat);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("oscillatory symbol membership depends on the declared type") {
  auto lat = lattice1();
  auto s = catalog::oscillatory(1, 0.5);
  auto in = membership_check(s, 2, 0, lat);
  CHECK(std::isfinite(in.base.value));
  CHECK(in.member);
  auto out = membership_check(s, 2, 0, lat, 1.0);
  CHECK_FALSE(out.member);
  CHECK(out.extended.value > 1.5 * out.base.value);
}

TEST_CASE("seminorm monotonicity and type grading") {
  auto lat = lattice1();
  auto s = catalog::modulated(catalog::oscillatory(1, 0.5));
  double prev = 0.0;
  for (int N = 0; N <= 2; ++N) {
    const double v = seminorm_estimate(s, N, 1, lat).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(seminorm_estimate(s, 1, 2, lat).value >= seminorm_estimate(s, 1, 1, lat).value);
  auto dense = lat;
  dense.points_per_decade *= 2;
  dense.x_points *= 2;
  CHECK(seminorm_estimate(s, 2, 1, dense).value >= seminorm_estimate(s, 2, 1, lat).value);
  for (auto sym : {catalog::oscillatory(1, 0.5), catalog::bessel(1, 1.0)})
    CHECK(seminorm_estimate(sym, 2, 0, lat, 0.5).value <= seminorm_estimate(sym, 2, 0, lat, 1.0).value);
}

TEST_CASE("hypoelliptic checks") {
  auto lat = lattice2();
  SUBCASE("constant symbol") {
    HypoellipticSpec spec;
    auto rep = hypoelliptic_check(catalog::identity(2), spec, 2, 1, lat);
    CHECK(rep.a_est == 1.0);
    for (const auto& r : rep.rows) {
      CHECK(r.base == 0.0);
      CHECK(r.extended == 0.0);
    }
    CHECK(rep.passed());
  }
  SUBCASE("heat symbol") {
    HypoellipticSpec spec{2.0, 1.0, 2.0, 0.0};
    auto rep = hypoelliptic_check(catalog::heat(2), spec, 1, 0, lat);
    CHECK(rep.a_est > 0.5);
    CHECK(rep.passed());
  }
  SUBCASE("heat parametrix") {
    HypoellipticSpec spec{-1.0, -2.0, 2.0, 0.0};
    auto rep = hypoelliptic_check(catalog::heat_parametrix(2), spec, 1, 0, lat);
    CHECK(rep.a_est > 0.0);
    CHECK(rep.passed());
  }
  SUBCASE("second derivative along the time axis") {
    // d^2_xi l = 2 while |l| ~ |tau| on the tau axis, so the rho = 1 constant grows with the range
    HypoellipticSpec spec{2.0, 1.0, 2.0, 0.0};
    CHECK_FALSE(hypoelliptic_check(catalog::heat(2), spec, 2, 0, lat).passed());
    auto half = catalog::heat(2);
    half.rho = 0.5;
    CHECK(hypoelliptic_check(half, spec, 2, 0, lat).passed());
  }
  SUBCASE("vanishing symbol") {
    auto zero = SymbolSpec::make_multiplier("zero", 2, 0.0, 1.0, [](auto) { return cplx(0.0); });
    CHECK_THROWS_AS(hypoelliptic_check(zero, HypoellipticSpec{}, 1, 0, lat), GuardViolation);
  }
  CHECK_THROWS_AS((HypoellipticSpec{0.0, 1.0, 1.0, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("leading composition terms") {
  auto s1 = catalog::bessel(1, 2.0);
  auto a = catalog::smooth_coefficient(1);
  auto p1 = composition_leading(s1, a, 1);
  auto p2 = composition_leading(s1, a, 2);
  const double pts[5][2] = {{0.1, 0.5}, {-1.3, 2.0}, {2.2, -7.5}, {3.9, 30.0}, {-5.0, -0.25}};
  for (const auto& pt : pts) {
    std::vector<double> x = {pt[0]}, xi = {pt[1]};
    const double xv = pt[0], k = pt[1];
    const cplx prod = (1.0 + k * k) * (1.5 + 0.5 * std::sin(xv));
    CHECK(std::abs(p1(x, xi) - prod) <= 1e-14 * std::abs(prod));
    // (1/i) * 2 xi * (1/2) cos x
    const cplx expect = prod + cplx(0.0, -1.0) * 2.0 * k * 0.5 * std::cos(xv);
    CHECK(std::abs(p2(x, xi) - expect) <= 1e-12 * std::abs(expect));
  }
  auto m = catalog::oscillatory(1, 0.5);
  for (int N : {1, 2, 3}) {
    auto c = composition_leading(s1, m, N);
    for (const auto& pt : pts) {
      std::vector<double> x = {pt[0]}, xi = {pt[1]};
      const cplx prod = s1(x, xi) * m(x, xi);
      CHECK(std::abs(c(x, xi) - prod) <= 1e-14 * std::max(1.0, std::abs(prod)));
    }
  }
  CHECK(p2.order == 2.0);
  CHECK_THROWS_AS(composition_leading(s1, a, 0), std::invalid_argument);
  CHECK_THROWS_AS(composition_leading(s1, a, 6), std::invalid_argument);
}
