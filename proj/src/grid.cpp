#include "amod/grid.hpp"

#include <algorithm>
#include <numeric>

#include "fft.hpp"

namespace amod {

double bracket(std::span<const double> x) {
  double s = 1.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

GridSpec::GridSpec(int d, double L, int n) : dim(d), half_width(L), samples(n) { validate(); }

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid: half_width must be positive");
  if (samples < 2 || samples % 2 != 0)
    throw std::invalid_argument("grid: samples must be a positive even integer");
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(samples);
  return total;
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
  std::vector<int> idx(dim);
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % samples);
    flat /= samples;
  }
  return idx;
}

std::size_t GridSpec::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = flat * samples + static_cast<std::size_t>(idx[a]);
  return flat;
}

void GridSpec::position(std::size_t flat, std::span<double> out) const {
  for (int a = dim - 1; a >= 0; --a) {
    out[a] = node(static_cast<int>(flat % samples));
    flat /= samples;
  }
}

void GridSpec::frequency(std::size_t flat, std::span<double> out) const {
  for (int a = dim - 1; a >= 0; --a) {
    out[a] = freq_node(static_cast<int>(flat % samples));
    flat /= samples;
  }
}

std::size_t GridSpec::frequency_index(std::span<const int> m) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) {
    if (m[a] < -samples / 2 || m[a] >= samples / 2)
      throw std::out_of_range("grid: frequency index outside [-N/2, N/2)");
    flat = flat * samples + static_cast<std::size_t>(m[a] + samples / 2);
  }
  return flat;
}

SampledField::SampledField(const GridSpec& g) : grid(g), values(g.size()) {}

SampledField::SampledField(const GridSpec& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("field: value count does not match grid");
}

bool SampledField::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Spectrum::Spectrum(const GridSpec& g) : grid(g), values(g.size()) {}

Spectrum::Spectrum(const GridSpec& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("spectrum: value count does not match grid");
}

namespace {

// Maps between the centered spectrum layout and the natural DFT layout.
// Centered index i on an axis is m = i - N/2; its DFT slot is m mod N, and the
// phase of the box offset -L contributes (-1)^m.
struct CenteredMap {
  std::vector<std::size_t> natural;  // centered flat -> natural flat
  std::vector<double> parity;        // (-1)^{sum m}

  explicit CenteredMap(const GridSpec& g) : natural(g.size()), parity(g.size()) {
    const int n = g.samples;
    std::vector<int> idx(g.dim, 0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      std::size_t nat = 0;
      int msum = 0;
      for (int a = 0; a < g.dim; ++a) {
        const int m = idx[a] - n / 2;
        nat = nat * n + static_cast<std::size_t>((m + n) % n);
        msum += m;
      }
      natural[flat] = nat;
      parity[flat] = (msum % 2 == 0) ? 1.0 : -1.0;
      for (int a = g.dim - 1; a >= 0; --a) {
        if (++idx[a] < n) break;
        idx[a] = 0;
      }
    }
  }
};

void check_size(const GridSpec& g, std::size_t n, const char* what) {
  g.validate();
  if (n != g.size()) throw std::invalid_argument(std::string(what) + ": size mismatch with grid");
}

}  // namespace

Spectrum forward_transform(const SampledField& f) {
  check_size(f.grid, f.values.size(), "forward_transform");
  const GridSpec& g = f.grid;
  std::vector<cplx> work = f.values;
  detail::dft_inplace(work, g.dim, g.samples, -1);

  const double scale = std::pow(g.step() / std::sqrt(2.0 * kPi), g.dim);
  CenteredMap map(g);
  Spectrum out(g);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = scale * map.parity[i] * work[map.natural[i]];
  return out;
}

SampledField inverse_transform(const Spectrum& F) {
  check_size(F.grid, F.values.size(), "inverse_transform");
  const GridSpec& g = F.grid;
  CenteredMap map(g);
  std::vector<cplx> work(g.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[map.natural[i]] = map.parity[i] * F.values[i];
  detail::dft_inplace(work, g.dim, g.samples, +1);

  const double scale = std::pow(g.freq_step() / std::sqrt(2.0 * kPi), g.dim);
  for (auto& v : work) v *= scale;
  return SampledField(g, std::move(work));
}

namespace {

template <class Coord>
std::vector<cplx> sample_nodes(const GridSpec& grid, const Generator& gen, Coord coord) {
  grid.validate();
  std::vector<cplx> values(grid.size());
  std::vector<double> x(grid.dim);
  for (std::size_t j = 0; j < values.size(); ++j) {
    coord(j, std::span<double>(x));
    const cplx v = gen(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("sample_function: generator returned a non-finite value");
    values[j] = v;
  }
  return values;
}

}  // namespace

SampledField sample_function(const GridSpec& grid, const Generator& gen) {
  return SampledField(grid, sample_nodes(grid, gen, [&](std::size_t j, std::span<double> x) {
                        grid.position(j, x);
                      }));
}

Spectrum sample_spectrum(const GridSpec& grid, const Generator& gen) {
  return Spectrum(grid, sample_nodes(grid, gen, [&](std::size_t j, std::span<double> x) {
                    grid.frequency(j, x);
                  }));
}

Spectrum band_multiply(const Spectrum& F, std::span<const cplx> window) {
  if (window.size() != F.values.size())
    throw std::invalid_argument("band_multiply: window not sampled on the spectrum grid");
  Spectrum out(F.grid);
  for (std::size_t i = 0; i < window.size(); ++i) out.values[i] = F.values[i] * window[i];
  return out;
}

Spectrum band_multiply(const Spectrum& F, std::span<const double> window) {
  if (window.size() != F.values.size())
    throw std::invalid_argument("band_multiply: window not sampled on the spectrum grid");
  Spectrum out(F.grid);
  for (std::size_t i = 0; i < window.size(); ++i) out.values[i] = F.values[i] * window[i];
  return out;
}

cplx inner_product(const SampledField& f, const SampledField& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * std::conj(g.values[i]);
  return acc * std::pow(f.grid.step(), f.grid.dim);
}

double l2_norm(const SampledField& f) { return std::sqrt(inner_product(f, f).real()); }

double sup_norm(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double spectral_tail_fraction(const Spectrum& F, double radius) {
  const GridSpec& g = F.grid;
  std::vector<double> xi(g.dim);
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    const double e = std::norm(F.values[i]);
    total += e;
    g.frequency(i, xi);
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    if (r2 > radius * radius) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace amod
