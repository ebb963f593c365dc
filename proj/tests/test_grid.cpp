#include "doctest.h"

#include <cmath>
#include <random>

#include "amod/grid.hpp"

using namespace amod;

namespace {

SampledField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  SampledField f(g);
  for (auto& v : f.values) v = {d(rng), d(rng)};
  return f;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Direct evaluation of the Riemann sum defining the forward transform.
cplx naive_forward(const SampledField& f, std::span<const double> xi) {
  const GridSpec& g = f.grid;
  std::vector<double> x(g.dim);
  cplx s = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    g.position(j, x);
    double phase = 0.0;
    for (int a = 0; a < g.dim; ++a) phase += x[a] * xi[a];
    s += f.values[j] * std::polar(1.0, -phase);
  }
  return s * std::pow(g.step() / std::sqrt(2.0 * kPi), g.dim);
}

}  // namespace

TEST_CASE("grid geometry") {
  GridSpec g(1, 16.0, 256);
  CHECK(g.step() == doctest::Approx(0.125));
  CHECK(g.freq_step() == doctest::Approx(kPi / 16.0));
  CHECK(g.nyquist() == doctest::Approx(kPi / 0.125));
  CHECK(g.node(0) == -16.0);
  CHECK(g.freq_node(0) == doctest::Approx(-128 * kPi / 16.0));
  CHECK(g.freq_node(128) == 0.0);

  GridSpec g2(2, 12.0, 128);
  std::vector<int> idx = {3, 77};
  CHECK(g2.unflatten(g2.flatten(idx)) == idx);
  CHECK_THROWS_AS(GridSpec(2, 12.0, 127), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, 12.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, -1.0, 16), std::invalid_argument);
}

TEST_CASE("zero field transforms to zero spectrum and back") {
  GridSpec g(2, 6.0, 32);
  SampledField z(g);
  for (const auto& v : forward_transform(z).values) CHECK(v == cplx(0.0));
  for (const auto& v : inverse_transform(Spectrum(g)).values) CHECK(v == cplx(0.0));
}

TEST_CASE("gaussian is its own transform") {
  GridSpec g(1, 16.0, 256);
  auto f = sample_function(g, [](auto x) { return cplx(std::exp(-0.5 * x[0] * x[0])); });
  auto F = forward_transform(f);
  double err = 0.0;
  std::vector<double> xi(1);
  for (std::size_t i = 0; i < F.size(); ++i) {
    g.frequency(i, xi);
    err = std::max(err, std::abs(F.values[i] - std::exp(-0.5 * xi[0] * xi[0])));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("fast transform matches the direct Riemann sum") {
  GridSpec g(2, 3.0, 16);
  auto f = random_field(g, 7);
  auto F = forward_transform(f);
  std::vector<double> xi(2);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < F.size(); i += 13) {
    g.frequency(i, xi);
    err = std::max(err, std::abs(F.values[i] - naive_forward(f, xi)));
    scale = std::max(scale, std::abs(F.values[i]));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("grid exponentials are discretely orthogonal") {
  for (int dim : {1, 2}) {
    GridSpec g(dim, 5.0, 32);
    std::vector<int> m0 = dim == 1 ? std::vector<int>{5} : std::vector<int>{-3, 7};
    std::vector<double> xi0(dim);
    for (int a = 0; a < dim; ++a) xi0[a] = m0[a] * g.freq_step();
    auto f = sample_function(g, [&](auto x) {
      double ph = 0.0;
      for (int a = 0; a < dim; ++a) ph += xi0[a] * x[a];
      return std::polar(1.0, ph);
    });
    auto F = forward_transform(f);
    const std::size_t at = g.frequency_index(m0);
    const double peak = std::pow(2.0 * g.half_width / std::sqrt(2.0 * kPi), dim);
    CHECK(std::abs(F.values[at] - peak) <= 1e-12 * peak);
    double off = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i)
      if (i != at) off = std::max(off, std::abs(F.values[i]));
    CHECK(off <= 1e-12 * peak);

    Spectrum spike(g);
    spike.values[at] = peak;
    auto back = inverse_transform(spike);
    CHECK(max_abs_diff(back.values, f.values) <= 1e-12);
  }
}

TEST_CASE("round trip, Plancherel and linearity") {
  for (auto g : {GridSpec(1, 16.0, 128), GridSpec(1, 16.0, 256), GridSpec(2, 12.0, 128)}) {
    auto f = random_field(g, 11);
    auto h = random_field(g, 12);
    auto F = forward_transform(f);
    auto back = inverse_transform(F);
    CHECK(max_abs_diff(back.values, f.values) <= 1e-12 * sup_norm(f.values));

    double e_space = 0.0, e_freq = 0.0;
    for (const auto& v : f.values) e_space += std::norm(v);
    for (const auto& v : F.values) e_freq += std::norm(v);
    e_space *= std::pow(g.step(), g.dim);
    e_freq *= std::pow(g.freq_step(), g.dim);
    CHECK(std::abs(e_space - e_freq) <= 1e-10 * e_space);

    const cplx a(2.0, -1.0), b(0.5, 3.0);
    SampledField comb(g);
    for (std::size_t i = 0; i < comb.size(); ++i) comb.values[i] = a * f.values[i] + b * h.values[i];
    auto C = forward_transform(comb);
    auto H = forward_transform(h);
    double lin = 0.0;
    for (std::size_t i = 0; i < C.size(); ++i) lin = std::max(lin, std::abs(C.values[i] - a * F.values[i] - b * H.values[i]));
    CHECK(lin <= 1e-12 * sup_norm(C.values));
  }
}

TEST_CASE("transforms reject mismatched sizes") {
  GridSpec g(1, 4.0, 16);
  SampledField f;
  f.grid = g;
  f.values.resize(15);
  CHECK_THROWS_AS(forward_transform(f), std::invalid_argument);
  Spectrum F;
  F.grid = g;
  F.values.resize(17);
  CHECK_THROWS_AS(inverse_transform(F), std::invalid_argument);
  CHECK_THROWS_AS(SampledField(g, std::vector<cplx>(3)), std::invalid_argument);
}

TEST_CASE("sampling") {
  GridSpec g1(1, 4.0, 16);
  for (const auto& v : sample_function(g1, [](auto) { return cplx(1.0); }).values) CHECK(v == cplx(1.0));

  GridSpec g2(2, 4.0, 16);
  auto f = sample_function(g2, [](auto x) { return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]))); });
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      std::vector<int> idx = {i, j};
      const double expect = std::exp(-g2.node(i) * g2.node(i)) * std::exp(-g2.node(j) * g2.node(j));
      CHECK(f.values[g2.flatten(idx)].real() == doctest::Approx(expect).epsilon(1e-14));
    }

  auto chirp = sample_function(g2, [](auto x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return std::polar(std::exp(-r2), r2);
  });
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(chirp.values[i]) == doctest::Approx(f.values[i].real()));

  CHECK_THROWS_AS(sample_function(g1, [](auto) { return cplx(NAN); }), std::domain_error);
}

TEST_CASE("band multiply") {
  GridSpec g(1, 4.0, 32);
  auto F = forward_transform(random_field(g, 3));
  std::vector<double> ones(g.size(), 1.0), zeros(g.size(), 0.0), box(g.size(), 0.0);
  CHECK(max_abs_diff(band_multiply(F, ones).values, F.values) == 0.0);
  for (const auto& v : band_multiply(F, zeros).values) CHECK(v == cplx(0.0));
  for (int i = 10; i < 20; ++i) box[i] = 1.0;
  auto T = band_multiply(F, box);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(T.values[i] == (box[i] ? F.values[i] : cplx(0.0)));
  CHECK_THROWS_AS(band_multiply(F, std::vector<double>(5)), std::invalid_argument);
}
