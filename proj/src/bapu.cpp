#include "amod/bapu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "amod/errors.hpp"
#include "finite_diff.hpp"
#include "node_iter.hpp"

namespace amod {

std::vector<double> Window::dense(std::size_t grid_size) const {
  std::vector<double> out(grid_size, 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) out[nodes[i]] = values[i];
  return out;
}

double Window::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

BapuFamily::BapuFamily(Covering covering, std::vector<Window> windows, double min_denominator)
    : covering_(std::move(covering)), windows_(std::move(windows)), min_denominator_(min_denominator) {}

double BapuFamily::evaluate(std::size_t w, std::span<const double> xi) const {
  const std::size_t k = windows_[w].patch;
  const double phi = covering_.patches[k].bump(xi);
  if (phi == 0.0) return 0.0;
  double denom = 0.0;
  for (std::size_t j : covering_.neighbors[k]) denom += covering_.patches[j].bump(xi);
  return phi / denom;
}

BapuFamily BapuFamily::without(std::size_t w) const {
  BapuFamily copy = *this;
  std::fill(copy.windows_[w].values.begin(), copy.windows_[w].values.end(), 0.0);
  return copy;
}

std::vector<std::size_t> BapuFamily::interior_windows() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < windows_.size(); ++w)
    if (patch(w).interior) out.push_back(w);
  return out;
}

BapuFamily build_bapu(const Covering& cov) {
  const GridSpec& g = cov.grid;
  const std::vector<double> denom = partition_denominator(cov);

  double min_den = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t i : cov.covered_nodes()) {
    if (denom[i] < min_den) {
      min_den = denom[i];
      worst = i;
    }
  }
  if (min_den < cov.params.delta) {
    std::vector<double> xi(g.dim);
    g.frequency(worst, xi);
    std::ostringstream os;
    os << "build_bapu: partition denominator " << min_den << " below delta " << cov.params.delta
       << " at covered node xi=(";
    for (int a = 0; a < g.dim; ++a) os << (a ? "," : "") << xi[a];
    os << "); increase the radius factor";
    throw GuardViolation(os.str());
  }

  std::vector<Window> windows;
  windows.reserve(cov.patches.size());
  for (std::size_t k = 0; k < cov.patches.size(); ++k) {
    const auto& p = cov.patches[k];
    Window w;
    w.patch = k;
    auto [lo, hi] = p.bounds();
    detail::for_each_node_in_box(g, lo, hi, [&](std::size_t flat, std::span<const double> xi) {
      const double phi = p.bump(xi);
      if (phi > 0.0) {
        w.nodes.push_back(flat);
        w.values.push_back(phi / denom[flat]);
      }
    });
    windows.push_back(std::move(w));
  }
  return BapuFamily(cov, std::move(windows), min_den);
}

double partition_sum(const BapuFamily& bapu) {
  std::vector<double> total(bapu.grid().size(), 0.0);
  for (const auto& w : bapu.windows())
    for (std::size_t i = 0; i < w.nodes.size(); ++i) total[w.nodes[i]] += w.values[i];
  double dev = 0.0;
  for (std::size_t i : bapu.covering().covered_nodes()) dev = std::max(dev, std::abs(total[i] - 1.0));
  return dev;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void summarize_uniformity(UniformityReport& report) {
  std::map<std::vector<int>, std::vector<double>> groups;
  for (const auto& r : report.rows) groups[r.order].push_back(r.value);
  std::map<std::vector<int>, double> med;
  for (auto& [order, vals] : groups) med[order] = median(vals);
  report.worst_factor = 0.0;
  for (const auto& r : report.rows) {
    const double m = med[r.order];
    const double f = (r.value > 0.0 && m > 0.0) ? std::max(r.value / m, m / r.value)
                     : (r.value == m)           ? 1.0
                                                : std::numeric_limits<double>::infinity();
    report.worst_factor = std::max(report.worst_factor, f);
  }
}

namespace {

int default_samples(int dim) { return dim == 1 ? 201 : dim == 2 ? 41 : 13; }

std::vector<std::size_t> selected(const BapuFamily& bapu, const std::vector<std::size_t>& requested) {
  return requested.empty() ? bapu.interior_windows() : requested;
}

// Visit a regular lattice of `s` points per axis over [lo, hi].
template <class Fn>
void for_each_lattice_point(std::span<const double> lo, std::span<const double> hi, int s, Fn&& fn) {
  const std::size_t n = lo.size();
  std::vector<int> t(n, 0);
  std::vector<double> x(n);
  while (true) {
    for (std::size_t a = 0; a < n; ++a) x[a] = lo[a] + (hi[a] - lo[a]) * t[a] / (s - 1);
    fn(std::span<const double>(x));
    int a = static_cast<int>(n) - 1;
    while (a >= 0 && ++t[a] == s) t[a--] = 0;
    if (a < 0) break;
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

UniformityReport derivative_bound_check(const BapuFamily& bapu, const DerivativeCheckOptions& opt) {
  const GridSpec& g = bapu.grid();
  const double alpha = bapu.covering().alpha();
  const int s = opt.samples_per_axis > 0 ? opt.samples_per_axis : default_samples(g.dim);
  const auto orders = detail::multi_indices(g.dim, opt.max_order);
  const double R = bapu.covering().covered_radius;

  UniformityReport rep;
  for (std::size_t w : selected(bapu, opt.windows)) {
    const auto& p = bapu.patch(w);
    const double eps = 1e-3 * (p.shape == PatchShape::Cube ? p.radius : p.inner_radius);
    const std::vector<double> steps(g.dim, eps);
    auto psi = [&](std::span<const double> xi) { return bapu.evaluate(w, xi); };
    std::vector<double> best(orders.size(), 0.0);
    auto [lo, hi] = p.bounds();
    for_each_lattice_point(lo, hi, s, [&](std::span<const double> xi) {
      if (norm2(xi) > R) return;
      const double weight_base = bracket(xi);
      const std::vector<double> pt(xi.begin(), xi.end());
      for (std::size_t o = 0; o < orders.size(); ++o) {
        const int ord = detail::order_of(orders[o]);
        const double d = detail::nested_central(psi, pt, orders[o], steps);
        best[o] = std::max(best[o], std::pow(weight_base, ord * alpha) * std::abs(d));
      }
    });
    for (std::size_t o = 0; o < orders.size(); ++o)
      rep.rows.push_back({w, p.label(), orders[o], best[o]});
  }
  summarize_uniformity(rep);
  return rep;
}

RescaledReport rescaled_window_check(const BapuFamily& bapu, const DerivativeCheckOptions& opt) {
  const auto& cov = bapu.covering();
  if (cov.dyadic) throw std::invalid_argument("rescaled_window_check: defined for alpha < 1 coverings only");
  const GridSpec& g = bapu.grid();
  const double alpha = cov.alpha();
  const int s = opt.samples_per_axis > 0 ? opt.samples_per_axis : default_samples(g.dim);
  const auto orders = detail::multi_indices(g.dim, opt.max_order);
  const double R = cov.covered_radius;

  RescaledReport rep;
  for (std::size_t w : selected(bapu, opt.windows)) {
    const auto& p = bapu.patch(w);
    const double stretch = std::pow(norm2(p.center), alpha);
    const double extent = p.radius / stretch;
    const std::vector<double> steps(g.dim, 1e-3 * extent);
    std::vector<double> orig(g.dim);
    auto to_original = [&](std::span<const double> t) {
      for (int a = 0; a < g.dim; ++a) orig[a] = stretch * t[a] + p.center[a];
      return std::span<const double>(orig);
    };
    auto psi_tilde = [&](std::span<const double> t) {
      std::vector<double> x(g.dim);
      for (int a = 0; a < g.dim; ++a) x[a] = stretch * t[a] + p.center[a];
      return bapu.evaluate(w, x);
    };

    std::vector<double> best(orders.size(), 0.0);
    double support = 0.0;
    const std::vector<double> lo(g.dim, -extent), hi(g.dim, extent);
    for_each_lattice_point(lo, hi, s, [&](std::span<const double> t) {
      if (norm2(to_original(t)) > R) return;
      const std::vector<double> pt(t.begin(), t.end());
      if (psi_tilde(t) > 0.0) support = std::max(support, norm2(t));
      for (std::size_t o = 0; o < orders.size(); ++o) {
        const double d = detail::nested_central(psi_tilde, pt, orders[o], steps);
        best[o] = std::max(best[o], std::abs(d));
      }
    });
    for (std::size_t o = 0; o < orders.size(); ++o)
      rep.derivatives.rows.push_back({w, p.label(), orders[o], best[o]});
    rep.support_radius.push_back(support);
    rep.common_radius = std::max(rep.common_radius, support);
  }
  summarize_uniformity(rep.derivatives);
  return rep;
}

DecayReport dilated_window_decay_check(const BapuFamily& bapu, const DecayCheckOptions& opt) {
  const auto& cov = bapu.covering();
  const GridSpec& g = bapu.grid();
  const int n = g.dim;
  const double alpha = cov.alpha();
  const int samples = opt.samples > 0 ? opt.samples : (n == 1 ? 4096 : n == 2 ? 512 : 64);
  const double omega = opt.frequency_extent;
  const GridSpec mu_grid(n, kPi * samples / (2.0 * omega), samples);

  DecayReport rep;
  for (std::size_t w : selected(bapu, opt.windows)) {
    const auto& p = bapu.patch(w);
    const double a = p.scale;
    auto [lo, hi] = p.bounds();
    for (int d = 0; d < n; ++d) {
      lo[d] /= a;
      hi[d] /= a;
      if (std::max(std::abs(lo[d]), std::abs(hi[d])) >= omega - mu_grid.freq_step())
        throw GuardViolation("dilated_window_decay_check: support of mu for " + p.label() +
                             " does not fit the sampling grid");
    }
    Spectrum mu(mu_grid);
    std::vector<double> scaled(n);
    detail::for_each_node_in_box(mu_grid, lo, hi, [&](std::size_t flat, std::span<const double> xi) {
      for (int d = 0; d < n; ++d) scaled[d] = a * xi[d];
      mu.values[flat] = bapu.evaluate(w, scaled);
    });
    const SampledField mu_hat = inverse_transform(mu);

    const double peak = sup_norm(mu_hat.values);
    std::vector<double> y(n);
    for (int m : opt.m_values) {
      const double denom = std::pow(a, (m - n) * (1.0 - alpha));
      double c = 0.0;
      for (std::size_t j = 0; j < mu_hat.values.size(); ++j) {
        const double v = std::abs(mu_hat.values[j]);
        if (v < opt.noise_floor * peak) continue;
        mu_grid.position(j, y);
        c = std::max(c, v * std::pow(bracket(y), m) / denom);
      }
      rep.constants.rows.push_back({w, p.label(), {m}, c});
    }
    std::vector<int> zero(n, samples / 2);
    rep.mu_hat_zero.push_back(mu_hat.values[mu_grid.flatten(zero)].real());

    // int psi_k over its support box with a lattice independent of the mu grid
    const int q = n == 1 ? 4001 : n == 2 ? 401 : 61;
    double integral = 0.0;
    auto [plo, phi] = p.bounds();
    double cell = 1.0;
    for (int d = 0; d < n; ++d) cell *= (phi[d] - plo[d]) / (q - 1);
    for_each_lattice_point(plo, phi, q, [&](std::span<const double> xi) { integral += bapu.evaluate(w, xi); });
    rep.mu_hat_zero_quadrature.push_back(std::pow(2.0 * kPi, -0.5 * n) * std::pow(a, -n) * integral * cell);
  }
  summarize_uniformity(rep.constants);
  return rep;
}

namespace {

double chi_norm(const FrequencyPatch& p, const MixedExponents& pt, int n) {
  if (p.shape == PatchShape::Cube) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= std::pow(2.0 * p.radius, 1.0 / pt[j]);
    return v;
  }
  // radial pieces: Riemann sum of the indicator on a tight grid
  const GridSpec fine(n, 1.05 * p.radius, n == 1 ? 8192 : n == 2 ? 1024 : 128);
  std::vector<double> ind(fine.size());
  std::vector<double> x(n);
  for (std::size_t i = 0; i < ind.size(); ++i) {
    fine.position(i, x);
    const double r = norm2(x);
    ind[i] = (r <= p.radius && r >= p.inner_radius) ? 1.0 : 0.0;
  }
  return mixed_norm(fine, ind, pt);
}

}  // namespace

std::vector<NormConditionReport> bapu_norm_condition(const BapuFamily& bapu, const std::vector<MixedExponents>& ps,
                                                     const NormConditionOptions& opt) {
  const GridSpec& g = bapu.grid();
  const int n = g.dim;
  std::vector<MixedExponents> tildes;
  for (const auto& p : ps) {
    if (static_cast<int>(p.size()) != n) throw std::invalid_argument("bapu_norm_condition: exponent dimension");
    tildes.push_back(p.tilde());
  }

  std::vector<NormConditionReport> reps(ps.size());
  for (std::size_t w : selected(bapu, opt.windows)) {
    const auto& patch = bapu.patch(w);
    SampledField inv;
    double tail_fraction = 0.0;
    for (int scale = 1;; scale *= 2) {
      const GridSpec big(n, g.half_width * scale, g.samples * scale);
      if (big.size() > opt.max_nodes)
        throw GuardViolation("bapu_norm_condition: tail of F^{-1}psi for " + patch.label() +
                             " exceeds tolerance within the node budget");
      Spectrum spec(big);
      auto [lo, hi] = patch.bounds();
      detail::for_each_node_in_box(big, lo, hi, [&](std::size_t flat, std::span<const double> xi) {
        spec.values[flat] = bapu.evaluate(w, xi);
      });
      inv = inverse_transform(spec);

      // nodes with |x_d| >= L/2 on some axis lie outside the central index block [N/4, 3N/4)
      const int N = big.samples;
      double total = 0.0, tail = 0.0;
      std::vector<int> idx(n, 0);
      for (std::size_t i = 0; i < inv.values.size(); ++i) {
        const double v = std::abs(inv.values[i]);
        total += v;
        bool outside = false;
        for (int d = 0; d < n; ++d) outside = outside || idx[d] <= N / 4 || idx[d] >= 3 * N / 4;
        if (outside) tail += v;
        for (int d = n - 1; d >= 0; --d) {
          if (++idx[d] < N) break;
          idx[d] = 0;
        }
      }
      tail_fraction = total > 0.0 ? tail / total : 0.0;
      if (tail_fraction <= opt.tail_tolerance) break;
    }

    for (std::size_t e = 0; e < ps.size(); ++e) {
      NormConditionRow row;
      row.window = w;
      row.label = patch.label();
      row.chi_norm = chi_norm(patch, tildes[e], n);
      row.inverse_norm = mixed_norm(inv, tildes[e]);
      row.tail_fraction = tail_fraction;
      row.grid_samples = inv.grid.samples;
      row.value = row.chi_norm * row.inverse_norm / patch.measure();
      reps[e].rows.push_back(row);
    }
  }

  for (auto& rep : reps) {
    std::vector<double> values;
    for (const auto& r : rep.rows) {
      values.push_back(r.value);
      rep.sup = std::max(rep.sup, r.value);
    }
    rep.median = median(values);
    for (double v : values) rep.worst_factor = std::max(rep.worst_factor, std::max(v / rep.median, rep.median / v));
  }
  return reps;
}

NormConditionReport bapu_norm_condition(const BapuFamily& bapu, const MixedExponents& p,
                                        const NormConditionOptions& opt) {
  return bapu_norm_condition(bapu, std::vector<MixedExponents>{p}, opt).front();
}

}  // namespace amod
