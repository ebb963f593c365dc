#include "amod/mixed_norm.hpp"

#include <algorithm>
#include <cmath>

#include "amod/errors.hpp"

namespace amod {

MixedExponents::MixedExponents(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("exponents: empty vector");
  for (double v : p_)
    if (!(v > 0.0)) throw std::invalid_argument("exponents: every p_j must be positive");
}

MixedExponents MixedExponents::tilde() const {
  std::vector<double> t(p_.size());
  double running = 1.0;
  for (std::size_t j = 0; j < p_.size(); ++j) {
    running = std::min(running, p_[j]);
    t[j] = running;
  }
  return MixedExponents(std::move(t));
}

double MixedExponents::r(double q) const {
  double r = std::min(1.0, q);
  for (double v : p_) r = std::min(r, v);
  return r;
}

double MixedExponents::min() const { return *std::min_element(p_.begin(), p_.end()); }

double mixed_norm(const GridSpec& grid, std::span<const double> abs_values, const MixedExponents& p) {
  if (static_cast<int>(p.size()) != grid.dim)
    throw std::invalid_argument("mixed_norm: exponent count differs from grid dimension");
  if (abs_values.size() != grid.size()) throw std::invalid_argument("mixed_norm: size mismatch");

  const std::size_t n = static_cast<std::size_t>(grid.samples);
  const double h = grid.step();
  std::vector<double> cur(abs_values.begin(), abs_values.end());
  for (int axis = 0; axis < grid.dim; ++axis) {
    const std::size_t stride = cur.size() / n;
    std::vector<double> next(stride, 0.0);
    const double pj = p[axis];
    if (std::isinf(pj)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < stride; ++r) next[r] = std::max(next[r], cur[i * stride + r]);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < stride; ++r) next[r] += std::pow(cur[i * stride + r], pj);
      for (auto& v : next) v = std::pow(h * v, 1.0 / pj);
    }
    cur = std::move(next);
  }
  return cur.front();
}

double mixed_norm(const SampledField& f, const MixedExponents& p) {
  std::vector<double> a(f.values.size());
  std::transform(f.values.begin(), f.values.end(), a.begin(), [](const cplx& z) { return std::abs(z); });
  return mixed_norm(f.grid, a, p);
}

void maximal_along_axis(const GridSpec& grid, std::vector<double>& a, int axis) {
  if (axis < 0 || axis >= grid.dim) throw std::out_of_range("maximal: axis out of range");
  const std::size_t n = static_cast<std::size_t>(grid.samples);
  std::size_t inner = 1;
  for (int b = axis + 1; b < grid.dim; ++b) inner *= n;
  const std::size_t outer = a.size() / (inner * n);

  std::vector<double> line(n), sums(n), best(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * n * inner + in;
      for (std::size_t j = 0; j < n; ++j) line[j] = a[base + j * inner];
      best = line;
      // For each left end, sweep right ends descending so `run` holds the best
      // mean over intervals [left, b'] with b' >= j; O(N^2) per line.
      for (std::size_t left = 0; left < n; ++left) {
        double s = 0.0;
        for (std::size_t b = left; b < n; ++b) {
          s += line[b];
          sums[b] = s / static_cast<double>(b - left + 1);
        }
        double run = 0.0;
        for (std::size_t b = n; b-- > left;) {
          run = std::max(run, sums[b]);
          best[b] = std::max(best[b], run);
        }
      }
      for (std::size_t j = 0; j < n; ++j) a[base + j * inner] = best[j];
    }
  }
}

SampledField directional_maximal(const SampledField& f, int axis) {
  std::vector<double> a(f.values.size());
  std::transform(f.values.begin(), f.values.end(), a.begin(), [](const cplx& z) { return std::abs(z); });
  maximal_along_axis(f.grid, a, axis);
  SampledField out(f.grid);
  std::copy(a.begin(), a.end(), out.values.begin());
  return out;
}

SampledField iterated_maximal(const SampledField& f, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("iterated_maximal: theta must be positive");
  std::vector<double> mag(f.values.size()), a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    mag[i] = std::abs(f.values[i]);
    a[i] = theta == 1.0 ? mag[i] : std::pow(mag[i], theta);
  }
  for (int axis = 0; axis < f.grid.dim; ++axis) maximal_along_axis(f.grid, a, axis);
  SampledField out(f.grid);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = theta == 1.0 ? a[i] : std::pow(a[i], 1.0 / theta);
    // The one-node interval is always admissible; keep that bound through pow rounding.
    out.values[i] = std::max(v, mag[i]);
  }
  return out;
}

PeetreReport peetre_check(const SampledField& f, std::span<const double> center, double R, double theta) {
  const GridSpec& g = f.grid;
  if (static_cast<int>(center.size()) != g.dim)
    throw std::invalid_argument("peetre_check: center dimension mismatch");
  if (!(R > 0.0) || !(theta > 0.0)) throw std::invalid_argument("peetre_check: R and theta must be positive");

  const Spectrum F = forward_transform(f);
  double total = 0.0, outside = 0.0;
  std::vector<double> xi(g.dim);
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    const double e = std::norm(F.values[i]);
    total += e;
    g.frequency(i, xi);
    for (int a = 0; a < g.dim; ++a) {
      if (std::abs(xi[a] - center[a]) > 2.0 * R) {
        outside += e;
        break;
      }
    }
  }
  PeetreReport rep;
  if (total == 0.0) return rep;
  if (outside > 1e-10 * total)
    throw GuardViolation("peetre_check: spectrum not contained in c_f + R[-2,2]^n (outside fraction " +
                         std::to_string(outside / total) + ")");

  const SampledField M = iterated_maximal(f, theta);
  const int n = g.samples;
  const double h = g.step();
  const double expo = g.dim / theta;

  // Weight table indexed by integer node offsets in [-(N-1), N-1]^dim.
  const std::size_t span = 2 * static_cast<std::size_t>(n) - 1;
  std::size_t wsize = 1;
  for (int a = 0; a < g.dim; ++a) wsize *= span;
  std::vector<double> inv_weight(wsize);
  {
    std::vector<double> d(g.dim);
    for (std::size_t w = 0; w < wsize; ++w) {
      std::size_t rem = w;
      for (int a = g.dim - 1; a >= 0; --a) {
        d[a] = R * h * (static_cast<double>(rem % span) - (n - 1));
        rem /= span;
      }
      inv_weight[w] = std::pow(bracket(d), -expo);
    }
  }

  std::vector<double> mag(f.values.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(f.values[i]);

  for (std::size_t x = 0; x < mag.size(); ++x) {
    const double mx = std::abs(M.values[x]);
    if (mx < 1e-14) {
      ++rep.excluded;
      continue;
    }
    const auto xi_idx = g.unflatten(x);
    double lhs = 0.0;
    for (std::size_t y = 0; y < mag.size(); ++y) {
      if (mag[y] == 0.0) continue;
      std::size_t rem = y, w = 0, mul = 1;
      for (int a = g.dim - 1; a >= 0; --a) {
        const int yj = static_cast<int>(rem % n);
        rem /= n;
        w += static_cast<std::size_t>(xi_idx[a] - yj + n - 1) * mul;
        mul *= span;
      }
      lhs = std::max(lhs, mag[y] * inv_weight[w]);
    }
    const double ratio = lhs / mx;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.argmax = x;
    }
  }
  return rep;
}

}  // namespace amod
