#include "doctest.h"

#include <cmath>
#include <set>

#include "amod/covering.hpp"

using namespace amod;

TEST_CASE("centers") {
  for (auto& [k, xi] : centers(0.0, 3, 2))
    for (int a = 0; a < 2; ++a) CHECK(xi[a] == k[a]);

  auto c = centers(0.5, 4, 1);
  bool found = false;
  for (auto& [k, xi] : c)
    if (k[0] == 3) {
      found = true;
      CHECK(xi[0] == doctest::Approx(9.48683298).epsilon(1e-8));
      CHECK(xi[0] == doctest::Approx(3.0 * std::sqrt(10.0)).epsilon(1e-15));
    }
  CHECK(found);
  CHECK(c.size() == 8);

  auto c2 = centers(0.75, 3, 2);
  CHECK(c2.size() == 48);
  for (auto& [k, xi] : c2) {
    std::vector<int> neg = {-k[0], -k[1]};
    bool mirrored = false;
    for (auto& [k2, xi2] : c2)
      if (k2 == neg) mirrored = (xi2[0] == -xi[0] && xi2[1] == -xi[1]);
    CHECK(mirrored);
    CHECK((k[0] != 0 || k[1] != 0));
  }
  CHECK_THROWS_AS(centers(1.0, 3, 1), std::invalid_argument);
}

TEST_CASE("center magnitudes are bracketed") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const double e = 1.0 / (1.0 - alpha);
    for (auto& [k, xi] : centers(alpha, 4, 2)) {
      const double kn = std::hypot(k[0], k[1]);
      const double r = std::hypot(xi[0], xi[1]);
      CHECK(r >= std::pow(kn, e) * (1 - 1e-14));
      CHECK(r <= std::pow(2.0, alpha / (2.0 * (1.0 - alpha))) * std::pow(kn, e) * (1 + 1e-14));
    }
  }
}

TEST_CASE("unit-scale covering at alpha 0") {
  GridSpec g(1, 16.0, 256);
  CoveringParams p;
  p.alpha = 0.0;
  p.radius_factor = 1.0;
  p.kmax = 8;
  auto cov = build_covering(p, g);
  CHECK(cov.patches.size() == 16);
  for (const auto& q : cov.patches) {
    CHECK(q.radius == 1.0);
    CHECK(q.center[0] == q.index[0]);
    CHECK(q.measure() == 2.0);
  }
  auto rep = admissibility_check(cov);
  CHECK(rep.overlap_max == 3);
  CHECK(rep.eccentricity == 1.0);
}

TEST_CASE("cube geometry") {
  GridSpec g(2, 12.0, 128);
  CoveringParams p;
  p.alpha = 0.5;
  p.radius_factor = 1.3;
  p.kmax = 3;
  auto cov = build_covering(p, g);
  for (const auto& q : cov.patches) {
    CHECK(q.measure() == doctest::Approx(std::pow(2.0 * q.radius, 2)));
    CHECK(q.scale == doctest::Approx(bracket(q.center)));
    CHECK(q.scale >= 1.0);
    CHECK(q.radius == doctest::Approx(1.3 * std::pow(q.scale, 0.5)));
  }
  CHECK(admissibility_check(cov).eccentricity == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("calibrated coverage") {
  // Nyquist 25 in 1D
  const double L = 4.0 * kPi;
  const int N = 200;
  GridSpec g(1, L, N);
  CHECK(g.nyquist() == doctest::Approx(25.0));
  CoveringParams p;
  p.alpha = 0.5;
  auto cov = calibrate_covering(p, g);
  auto rep = admissibility_check(cov);
  CHECK(rep.coverage_deficit == 0.0);
  CHECK(min_covered_denominator(cov).first >= p.delta);
  CHECK(cov.radius_factor >= 0.75);

  // every node with |xi| <= 0.9 Omega sits in a patch (direct test)
  std::vector<double> xi(1);
  for (std::size_t i : cov.covered_nodes()) {
    g.frequency(i, xi);
    bool in = false;
    for (const auto& q : cov.patches) in = in || q.contains(xi);
    CHECK(in);
  }
}

TEST_CASE("overlap count and comparability are stable under truncation") {
  GridSpec g(1, 2.0, 4096);
  CoveringParams p;
  p.alpha = 0.5;
  p.radius_factor = 1.5;
  p.kmax = 4;
  auto a = admissibility_check(build_covering(p, g));
  p.kmax = 8;
  auto b = admissibility_check(build_covering(p, g));
  CHECK(a.overlap_max == b.overlap_max);
  CHECK(b.measure_comparability <= 2.0 * a.measure_comparability);
  CHECK(a.measure_comparability <= 2.0 * b.measure_comparability);
}

TEST_CASE("forced small radius leaves nodes uncovered") {
  GridSpec g(1, 16.0, 256);
  CoveringParams p;
  p.alpha = 0.5;
  p.radius_factor = 0.1;
  auto rep = admissibility_check(build_covering(p, g));
  CHECK(rep.coverage_deficit > 0.0);
  REQUIRE(rep.uncovered_node.has_value());
}

TEST_CASE("dyadic covering") {
  GridSpec g(2, 12.0, 128);
  auto cov = dyadic_covering(g);
  int shells = 0;
  for (const auto& q : cov.patches) shells += q.shape == PatchShape::Shell;
  CHECK(std::abs(shells - (std::log2(g.nyquist()) + 1)) <= 2.0);
  CHECK(admissibility_check(cov).overlap_max <= 3);
  for (std::size_t k = 0; k < cov.patches.size(); ++k)
    for (std::size_t j : cov.neighbors[k]) {
      const int dk = cov.patches[k].index[0], dj = cov.patches[j].index[0];
      CHECK(std::abs(dk - dj) <= 1);
    }
  for (std::size_t k = 2; k < cov.patches.size(); ++k)
    CHECK(cov.patches[k].measure() / cov.patches[k - 1].measure() == doctest::Approx(4.0));
  CHECK(admissibility_check(cov).coverage_deficit == 0.0);
}
