#include "doctest.h"

#include <cmath>
#include <random>

#include "amod/bump.hpp"
#include "amod/errors.hpp"
#include "amod/modspace.hpp"

using namespace amod;

namespace {

SampledField modulated_gaussian(const GridSpec& g, std::vector<double> omega, double lambda = 1.0) {
  return sample_function(g, [=](auto x) {
    double r2 = 0.0, ph = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      r2 += x[a] * x[a];
      ph += omega[a] * x[a];
    }
    return std::polar(std::exp(-lambda * r2), ph);
  });
}

double rel_diff(const SampledField& a, const SampledField& b) {
  double m = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
    s = std::max(s, std::abs(b.values[i]));
  }
  return s > 0.0 ? m / s : m;
}

// Dyadic Littlewood-Paley pieces coded from scratch: ball |xi| < 2 with
// exp(-1/(1-|xi|^2/4)), shells exp(-1/(1-(log2|xi| - j)^2)) on 2^{j-1} < |xi| < 2^{j+1}.
double lp_piece(int j, double r) {
  auto g = [](double t2) { return t2 < 1.0 ? std::exp(-1.0 / (1.0 - t2)) : 0.0; };
  if (j == 0) return g(r * r / 4.0);
  if (r <= std::ldexp(1.0, j - 1) || r >= std::ldexp(1.0, j + 1)) return 0.0;
  const double t = std::log2(r) - j;
  return g(t * t);
}

// Besov-type norm via a direct O(N^2) DFT on a 1D grid.
double besov_oracle(const std::vector<cplx>& f, double L, int N, double s, double p, double q, double covered) {
  const double h = 2.0 * L / N, dxi = kPi / L;
  int J = 0;
  while (std::ldexp(1.0, J) < covered) ++J;  // shells j with 2^{j-1} < covered
  std::vector<cplx> F(N);
  for (int m = -N / 2; m < N / 2; ++m) {
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) acc += f[j] * std::polar(1.0, -(-L + j * h) * m * dxi);
    F[m + N / 2] = acc * h / std::sqrt(2.0 * kPi);
  }
  double total = 0.0;
  for (int band = 0; band <= J; ++band) {
    std::vector<cplx> G(N);
    for (int m = -N / 2; m < N / 2; ++m) {
      const double r = std::abs(m * dxi);
      double denom = 0.0;
      for (int b = 0; b <= J; ++b) denom += lp_piece(b, r);
      const double w = denom > 0.0 ? lp_piece(band, r) / denom : 0.0;
      G[m + N / 2] = w * F[m + N / 2];
    }
    double lp = 0.0;
    for (int j = 0; j < N; ++j) {
      cplx acc = 0.0;
      for (int m = -N / 2; m < N / 2; ++m) acc += G[m + N / 2] * std::polar(1.0, (-L + j * h) * m * dxi);
      lp += std::pow(std::abs(acc * dxi / std::sqrt(2.0 * kPi)), p);
    }
    lp = std::pow(h * lp, 1.0 / p);
    const double weight = band == 0 ? 1.0 : std::sqrt(1.0 + std::ldexp(1.0, 2 * band));
    total += std::pow(std::pow(weight, s) * lp, q);
  }
  return std::pow(total, 1.0 / q);
}

const GridSpec kGrid1(1, 16.0, 256);

}  // namespace

TEST_CASE("space parameters") {
  SpaceParams sp;
  sp.q = 0.0;
  CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
  sp.q = kInf;
  CHECK_NOTHROW(sp.validate());
  sp.alpha = 1.5;
  CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
}

TEST_CASE("zero field") {
  SpaceParams sp;
  sp.p = MixedExponents{2.0};
  auto b = make_bapu(sp, kGrid1);
  SampledField z(kGrid1);
  CHECK(modulation_norm(z, b, sp) == 0.0);
  for (const auto& r : band_profile(z, b, sp).rows) CHECK(r.weighted == 0.0);
  for (const auto& v : band_project(z, b, 2).values) CHECK(v == cplx(0.0));
}

TEST_CASE("band projections sum to the field") {
  for (auto g : {kGrid1, GridSpec(2, 12.0, 128)}) {
    for (double alpha : {0.0, 0.5, 1.0}) {
      SpaceParams sp;
      sp.alpha = alpha;
      sp.p = MixedExponents(std::vector<double>(g.dim, 2.0));
      auto b = make_bapu(sp, g);
      auto f = modulated_gaussian(g, std::vector<double>(g.dim, 3.0));
      SampledField sum(g);
      for (std::size_t w = 0; w < b.size(); ++w) {
        auto part = band_project(f, b, w);
        for (std::size_t i = 0; i < sum.size(); ++i) sum.values[i] += part.values[i];
      }
      CHECK(rel_diff(sum, f) <= 1e-10);
    }
  }
}

TEST_CASE("single band field") {
  // windows separated enough that some nodes see only one raw bump
  SpaceParams sp;
  sp.alpha = 0.5;
  sp.s = 1.5;
  sp.p = MixedExponents{3.0};
  sp.q = 2.0;
  CoveringParams cp;
  cp.radius_factor = 1.0;
  cp.delta = 0.0;
  auto b = make_bapu(sp, kGrid1, cp);

  // longest run of nodes where some window is exactly 1
  std::size_t best_w = 0, best_len = 0, best_start = 0;
  for (std::size_t w = 0; w < b.size(); ++w) {
    const auto& win = b.windows()[w];
    std::size_t run = 0;
    for (std::size_t i = 0; i < win.nodes.size(); ++i) {
      run = (win.values[i] == 1.0 && (run == 0 || win.nodes[i] == win.nodes[i - 1] + 1)) ? run + 1 : 0;
      if (run > best_len) {
        best_len = run;
        best_w = w;
        best_start = win.nodes[i + 1 - run];
      }
    }
  }
  REQUIRE(best_len >= 5);
  Spectrum F(kGrid1);
  const double mid = 0.5 * (best_len - 1);
  for (std::size_t i = 0; i < best_len; ++i) {
    const double t = (static_cast<double>(i) - mid) / (mid + 1.0);
    F.values[best_start + i] = mother_bump(t * t);
  }
  auto f = inverse_transform(F);
  auto proj = band_project(f, b, best_w);
  CHECK(rel_diff(proj, f) <= 1e-10);

  const double expect = std::pow(b.patch(best_w).scale, sp.s) * mixed_norm(f, sp.p);
  CHECK(std::abs(modulation_norm(f, b, sp) - expect) <= 1e-6 * expect);
}

TEST_CASE("homogeneity and recombination") {
  SpaceParams sp;
  sp.p = MixedExponents{2.0, 4.0};
  sp.s = 2.0;
  GridSpec g(2, 12.0, 128);
  auto b = make_bapu(sp, g);
  auto f = modulated_gaussian(g, {2.0, -4.0});
  SampledField cf(g);
  const cplx c(0.0, -3.0);
  for (std::size_t i = 0; i < f.size(); ++i) cf.values[i] = c * f.values[i];
  const double nf = modulation_norm(f, b, sp);
  CHECK(modulation_norm(cf, b, sp) == doctest::Approx(3.0 * nf).epsilon(1e-13));

  for (double q : {0.5, 1.0, 2.0, kInf}) {
    sp.q = q;
    auto prof = band_profile(f, b, sp);
    CHECK(prof.rows.size() == b.size());
    CHECK(std::abs(prof.combine() - modulation_norm(f, b, sp)) <= 1e-12 * nf);
  }
}

TEST_CASE("norm is monotone in s and non-increasing in q") {
  SpaceParams sp;
  sp.p = MixedExponents{2.0};
  auto b = make_bapu(sp, kGrid1);
  auto f = modulated_gaussian(kGrid1, {7.0});
  double prev = 0.0;
  for (double s : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
    sp.s = s;
    const double v = modulation_norm(f, b, sp);
    CHECK(v >= prev);
    prev = v;
  }
  sp.s = 1.0;
  prev = std::numeric_limits<double>::infinity();
  for (double q : {0.5, 1.0, 2.0, 4.0, kInf}) {
    sp.q = q;
    const double v = modulation_norm(f, b, sp);
    CHECK(v <= prev * (1.0 + 1e-14));
    prev = v;
  }
}

TEST_CASE("dominant band follows the modulation frequency") {
  SpaceParams sp;
  sp.p = MixedExponents{2.0};
  sp.alpha = 0.25;
  auto b = make_bapu(sp, kGrid1);
  double prev_center = -1.0;
  for (double omega : {0.0, 3.0, 6.0, 9.0, 12.0, 15.0}) {
    auto prof = band_profile(modulated_gaussian(kGrid1, {omega}), b, sp);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < prof.rows.size(); ++i)
      if (prof.rows[i].weighted > prof.rows[arg].weighted) arg = i;
    const double center = b.patch(prof.rows[arg].window).center[0];
    CHECK(std::abs(center) >= prev_center);
    prev_center = std::abs(center);
  }
  CHECK(prev_center > 10.0);
}

TEST_CASE("truncation stability") {
  SpaceParams sp;
  sp.p = MixedExponents{2.0};
  sp.s = 1.0;
  CoveringParams cp;
  auto auto_b = make_bapu(sp, kGrid1, cp);
  int kmax = 0;
  for (std::size_t w = 0; w < auto_b.size(); ++w) kmax = std::max(kmax, std::abs(auto_b.patch(w).index[0]));
  cp.kmax = 2 * kmax;
  auto wide = make_bapu(sp, kGrid1, cp);
  auto f = modulated_gaussian(kGrid1, {5.0});
  const double a = modulation_norm(f, auto_b, sp), c = modulation_norm(f, wide, sp);
  CHECK(std::abs(a - c) <= 1e-6 * a);
}

TEST_CASE("spectral tail guard") {
  SpaceParams sp;
  sp.p = MixedExponents{2.0};
  auto b = make_bapu(sp, kGrid1);
  auto f = modulated_gaussian(kGrid1, {0.95 * kGrid1.nyquist()});
  CHECK_THROWS_AS(modulation_norm(f, b, sp), GuardViolation);
  auto other = modulated_gaussian(GridSpec(1, 16.0, 128), {1.0});
  CHECK_THROWS_AS(modulation_norm(other, b, sp), std::invalid_argument);
}

TEST_CASE("dyadic path reproduces an independently coded Besov norm") {
  SpaceParams sp;
  sp.alpha = 1.0;
  sp.s = 1.5;
  sp.p = MixedExponents{3.0};
  sp.q = 1.5;
  auto b = make_bapu(sp, kGrid1);
  auto f = sample_function(kGrid1, [](auto x) {
    return std::polar(std::exp(-x[0] * x[0]), 4.0 * x[0]) + 0.5 * std::exp(-0.5 * (x[0] - 1.0) * (x[0] - 1.0));
  });
  const double ours = modulation_norm(f, b, sp);
  const double oracle = besov_oracle(f.values, 16.0, 256, sp.s, 3.0, sp.q, b.covering().covered_radius);
  CHECK(std::abs(ours - oracle) <= 1e-10 * oracle);
}
