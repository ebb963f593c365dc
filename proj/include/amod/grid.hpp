#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace amod {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Japanese bracket <x> = (1 + |x|^2)^{1/2}.
double bracket(std::span<const double> x);
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

/// Uniform sampling of the periodic box [-L, L)^n with N nodes per axis.
///
/// Spatial nodes are x_j = -L + j*h with h = 2L/N; frequency nodes are the
/// centered set xi_m = m*pi/L, m = -N/2 .. N/2-1. Arrays over the grid are
/// stored row-major with axis 0 (x_1) slowest.
struct GridSpec {
  int dim = 1;
  double half_width = 16.0;
  int samples = 256;

  GridSpec() = default;
  GridSpec(int dim, double half_width, int samples);

  /// Throws std::invalid_argument if the fields are out of range.
  void validate() const;

  double step() const { return 2.0 * half_width / samples; }
  double freq_step() const { return kPi / half_width; }
  double nyquist() const { return kPi / step(); }
  std::size_t size() const;

  double node(int j) const { return -half_width + j * step(); }
  double freq_node(int i) const { return (i - samples / 2) * freq_step(); }

  /// Multi-index of a flat row-major index.
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> idx) const;

  /// Coordinates of spatial / frequency node `flat`.
  void position(std::size_t flat, std::span<double> out) const;
  void frequency(std::size_t flat, std::span<double> out) const;

  /// Flat index of the frequency node with centered indices m (each in [-N/2, N/2)).
  std::size_t frequency_index(std::span<const int> m) const;

  bool operator==(const GridSpec&) const = default;
};

struct SampledField {
  GridSpec grid;
  std::vector<cplx> values;

  SampledField() = default;
  explicit SampledField(const GridSpec& g);
  SampledField(const GridSpec& g, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
  bool all_finite() const;
};

/// Spectrum on the centered frequency nodes; index i along an axis means m = i - N/2.
struct Spectrum {
  GridSpec grid;
  std::vector<cplx> values;

  Spectrum() = default;
  explicit Spectrum(const GridSpec& g);
  Spectrum(const GridSpec& g, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
};

/// f^(xi_m) = (2pi)^{-n/2} h^n sum_j f(x_j) exp(-i x_j . xi_m).
Spectrum forward_transform(const SampledField& f);

/// f(x_j) = (2pi)^{-n/2} dxi^n sum_m F(xi_m) exp(i x_j . xi_m).
SampledField inverse_transform(const Spectrum& F);

using Generator = std::function<cplx(std::span<const double>)>;

/// values[j] = gen(x_j). Throws std::domain_error on a non-finite sample.
SampledField sample_function(const GridSpec& grid, const Generator& gen);

/// Same as sample_function but over frequency nodes.
Spectrum sample_spectrum(const GridSpec& grid, const Generator& gen);

/// Pointwise product with a window sampled on the frequency nodes.
Spectrum band_multiply(const Spectrum& F, std::span<const cplx> window);
Spectrum band_multiply(const Spectrum& F, std::span<const double> window);

/// Discrete L2 inner product h^n sum f conj(g).
cplx inner_product(const SampledField& f, const SampledField& g);
double l2_norm(const SampledField& f);
double sup_norm(std::span<const cplx> v);

/// Energy fraction of F outside the Euclidean ball |xi| <= radius.
double spectral_tail_fraction(const Spectrum& F, double radius);

}  // namespace amod
