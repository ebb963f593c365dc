#include "amod/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "amod/bump.hpp"
#include "amod/errors.hpp"
#include "node_iter.hpp"

namespace amod {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double FrequencyPatch::measure() const {
  const int n = static_cast<int>(center.size());
  switch (shape) {
    case PatchShape::Cube:
      return std::pow(2.0 * radius, n);
    case PatchShape::Ball:
    case PatchShape::Shell: {
      // volume of the unit n-ball
      const double unit = n == 1 ? 2.0 : n == 2 ? kPi : 4.0 * kPi / 3.0;
      return unit * (std::pow(radius, n) - std::pow(inner_radius, n));
    }
  }
  return 0.0;
}

bool FrequencyPatch::contains(std::span<const double> xi) const {
  if (shape == PatchShape::Cube) {
    for (std::size_t a = 0; a < center.size(); ++a)
      if (std::abs(xi[a] - center[a]) > radius) return false;
    return true;
  }
  const double r = norm2(xi);
  return r <= radius && r >= inner_radius;
}

bool FrequencyPatch::overlaps(const FrequencyPatch& o) const {
  if (shape == PatchShape::Cube && o.shape == PatchShape::Cube) {
    for (std::size_t a = 0; a < center.size(); ++a)
      if (std::abs(center[a] - o.center[a]) >= radius + o.radius) return false;
    return true;
  }
  // radial pieces: open annuli (inner, outer) intersect
  return std::max(inner_radius, o.inner_radius) < std::min(radius, o.radius);
}

double FrequencyPatch::distance(std::span<const double> xi) const {
  if (shape == PatchShape::Cube) {
    double s = 0.0;
    for (std::size_t a = 0; a < center.size(); ++a) {
      const double d = std::max(0.0, std::abs(xi[a] - center[a]) - radius);
      s += d * d;
    }
    return std::sqrt(s);
  }
  const double r = norm2(xi);
  if (r > radius) return r - radius;
  if (r < inner_radius) return inner_radius - r;
  return 0.0;
}

double FrequencyPatch::bump(std::span<const double> xi) const {
  switch (shape) {
    case PatchShape::Cube: {
      double t2 = 0.0;
      for (std::size_t a = 0; a < center.size(); ++a) {
        const double d = (xi[a] - center[a]) / radius;
        t2 += d * d;
      }
      return mother_bump(t2);
    }
    case PatchShape::Ball: {
      const double t = norm2(xi) / radius;
      return mother_bump(t * t);
    }
    case PatchShape::Shell: {
      const double r = norm2(xi);
      if (r <= inner_radius || r >= radius) return 0.0;
      const double t = std::log2(r) - index.front();
      return mother_bump(t * t);
    }
  }
  return 0.0;
}

std::pair<std::vector<double>, std::vector<double>> FrequencyPatch::bounds() const {
  const std::size_t n = center.size();
  std::vector<double> lo(n), hi(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (shape == PatchShape::Cube) {
      lo[a] = center[a] - radius;
      hi[a] = center[a] + radius;
    } else {
      lo[a] = -radius;
      hi[a] = radius;
    }
  }
  return {lo, hi};
}

std::string FrequencyPatch::label() const {
  std::ostringstream os;
  os << (shape == PatchShape::Cube ? "k=(" : "j=(");
  for (std::size_t i = 0; i < index.size(); ++i) os << (i ? "," : "") << index[i];
  os << ")";
  return os.str();
}

std::optional<std::size_t> Covering::find(std::span<const int> idx) const {
  for (std::size_t i = 0; i < patches.size(); ++i)
    if (std::equal(idx.begin(), idx.end(), patches[i].index.begin(), patches[i].index.end())) return i;
  return std::nullopt;
}

std::vector<std::size_t> Covering::covered_nodes() const {
  std::vector<std::size_t> out;
  std::vector<double> xi(grid.dim);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.frequency(i, xi);
    if (norm2(xi) <= covered_radius) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<std::vector<int>, std::vector<double>>> centers(double alpha, int kmax, int dim) {
  if (!(alpha >= 0.0) || alpha >= 1.0)
    throw std::invalid_argument("centers: alpha must lie in [0,1); use the dyadic covering for alpha = 1");
  if (kmax < 1) throw std::invalid_argument("centers: kmax must be at least 1");
  if (dim < 1 || dim > 3) throw std::invalid_argument("centers: dim must be 1, 2 or 3");

  std::vector<std::pair<std::vector<int>, std::vector<double>>> out;
  std::vector<int> k(dim, -kmax);
  const double expo = alpha / (1.0 - alpha);
  while (true) {
    if (std::any_of(k.begin(), k.end(), [](int v) { return v != 0; })) {
      std::vector<double> kd(k.begin(), k.end());
      const double s = expo == 0.0 ? 1.0 : std::pow(bracket(kd), expo);
      std::vector<double> xi(dim);
      for (int a = 0; a < dim; ++a) xi[a] = k[a] * s;
      out.emplace_back(k, std::move(xi));
    }
    int a = dim - 1;
    while (a >= 0 && ++k[a] > kmax) k[a--] = -kmax;
    if (a < 0) break;
  }
  return out;
}

namespace {

void link_neighbors(Covering& cov) {
  const std::size_t P = cov.patches.size();
  cov.neighbors.assign(P, {});
  for (std::size_t i = 0; i < P; ++i) {
    cov.neighbors[i].push_back(i);
    for (std::size_t j = i + 1; j < P; ++j) {
      if (cov.patches[i].overlaps(cov.patches[j])) {
        cov.neighbors[i].push_back(j);
        cov.neighbors[j].push_back(i);
      }
    }
  }
  for (auto& nb : cov.neighbors) std::sort(nb.begin(), nb.end());
}

}  // namespace

Covering build_covering(const CoveringParams& params, const GridSpec& grid) {
  grid.validate();
  if (!(params.radius_factor > 0.0)) throw std::invalid_argument("build_covering: A must be positive");
  if (!(params.margin > 0.0) || params.margin > 1.0)
    throw std::invalid_argument("build_covering: margin must lie in (0, 1]");

  Covering cov;
  cov.params = params;
  cov.grid = grid;
  cov.radius_factor = params.radius_factor;
  cov.covered_radius = params.margin * grid.nyquist();

  const double alpha = params.alpha;
  int kmax = params.kmax;
  if (kmax <= 0) kmax = std::max(1, static_cast<int>(std::floor(std::pow(cov.covered_radius, 1.0 - alpha))));

  for (auto& [k, xi] : centers(alpha, kmax, grid.dim)) {
    if (norm2(xi) > cov.covered_radius) continue;
    FrequencyPatch p;
    p.index = k;
    p.center = xi;
    p.scale = bracket(xi);
    p.radius = params.radius_factor * std::pow(p.scale, alpha);
    p.shape = PatchShape::Cube;
    p.interior = norm2(xi) + p.radius <= cov.covered_radius;
    cov.patches.push_back(std::move(p));
  }
  if (cov.patches.empty())
    throw std::invalid_argument("build_covering: no centers retained; grid too coarse for this alpha");
  link_neighbors(cov);
  return cov;
}

Covering dyadic_covering(const GridSpec& grid, double margin) {
  grid.validate();
  Covering cov;
  cov.params.alpha = 1.0;
  cov.params.margin = margin;
  cov.grid = grid;
  cov.dyadic = true;
  cov.radius_factor = 1.0;
  cov.covered_radius = margin * grid.nyquist();

  FrequencyPatch ball;
  ball.index = {0};
  ball.center.assign(grid.dim, 0.0);
  ball.scale = 1.0;
  ball.radius = 2.0;
  ball.shape = PatchShape::Ball;
  ball.interior = ball.radius <= cov.covered_radius;
  cov.patches.push_back(ball);

  // Shells are kept while they reach into the covered ball, so the partition
  // denominator never relies on a dropped shell there.
  for (int j = 1; std::ldexp(1.0, j - 1) < cov.covered_radius; ++j) {
    FrequencyPatch s;
    s.index = {j};
    s.center.assign(grid.dim, 0.0);
    s.center[0] = std::ldexp(1.0, j);
    s.scale = bracket(s.center);
    s.inner_radius = std::ldexp(1.0, j - 1);
    s.radius = std::ldexp(1.0, j + 1);
    s.shape = PatchShape::Shell;
    s.interior = s.radius <= cov.covered_radius;
    cov.patches.push_back(std::move(s));
  }
  link_neighbors(cov);
  return cov;
}

std::vector<double> partition_denominator(const Covering& cov) {
  const GridSpec& g = cov.grid;
  std::vector<double> denom(g.size(), 0.0);
  for (const auto& p : cov.patches) {
    auto [lo, hi] = p.bounds();
    detail::for_each_node_in_box(g, lo, hi, [&](std::size_t flat, std::span<const double> xi) {
      denom[flat] += p.bump(xi);
    });
  }
  return denom;
}

std::pair<double, std::size_t> min_covered_denominator(const Covering& cov) {
  const auto denom = partition_denominator(cov);
  double best = std::numeric_limits<double>::infinity();
  std::size_t where = 0;
  for (std::size_t i : cov.covered_nodes()) {
    if (denom[i] < best) {
      best = denom[i];
      where = i;
    }
  }
  return {best, where};
}

AdmissibilityReport admissibility_check(const Covering& cov) {
  if (cov.patches.empty()) throw std::invalid_argument("admissibility_check: empty covering");
  AdmissibilityReport rep;
  const GridSpec& g = cov.grid;
  const int n = g.dim;

  for (const auto& nb : cov.neighbors) rep.overlap_max = std::max<int>(rep.overlap_max, nb.size());

  const double alpha = cov.alpha();
  std::vector<double> xi(n);
  for (const auto& p : cov.patches) {
    const double Q = p.measure();
    const int per_axis = 5;
    if (p.shape == PatchShape::Cube) {
      std::vector<int> t(n, 0);
      while (true) {
        for (int a = 0; a < n; ++a) xi[a] = p.center[a] - p.radius + 2.0 * p.radius * t[a] / (per_axis - 1);
        const double w = std::pow(bracket(xi), alpha * n);
        rep.measure_comparability = std::max({rep.measure_comparability, Q / w, w / Q});
        int a = n - 1;
        while (a >= 0 && ++t[a] == per_axis) t[a--] = 0;
        if (a < 0) break;
      }
      rep.eccentricity = std::max(rep.eccentricity, std::sqrt(static_cast<double>(n)));
    } else {
      for (int t = 0; t < per_axis; ++t) {
        const double r = p.inner_radius + (p.radius - p.inner_radius) * t / (per_axis - 1);
        const double w = std::pow(bracket(r), alpha * n);
        rep.measure_comparability = std::max({rep.measure_comparability, Q / w, w / Q});
      }
      const double inscribed = p.shape == PatchShape::Ball ? p.radius : 0.5 * (p.radius - p.inner_radius);
      rep.eccentricity = std::max(rep.eccentricity, p.radius / inscribed);
    }
  }

  std::vector<char> inside(g.size(), 0);
  for (const auto& p : cov.patches) {
    auto [lo, hi] = p.bounds();
    detail::for_each_node_in_box(g, lo, hi, [&](std::size_t flat, std::span<const double> x) {
      if (!inside[flat] && p.contains(x)) inside[flat] = 1;
    });
  }
  for (std::size_t i : cov.covered_nodes()) {
    if (inside[i]) continue;
    g.frequency(i, xi);
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : cov.patches) d = std::min(d, p.distance(xi));
    if (d > rep.coverage_deficit) {
      rep.coverage_deficit = d;
      rep.uncovered_node = xi;
    }
  }
  return rep;
}

Covering calibrate_covering(const CoveringParams& params, const GridSpec& grid) {
  CoveringParams p = params;
  p.radius_factor = 0.75;
  for (int step = 0; step < 40; ++step, p.radius_factor *= 1.25) {
    Covering cov = build_covering(p, grid);
    cov.params.radius_factor = params.radius_factor;
    cov.calibration_steps = step;
    if (admissibility_check(cov).coverage_deficit > 0.0) continue;
    if (min_covered_denominator(cov).first < params.delta) continue;
    return cov;
  }
  throw GuardViolation("calibrate_covering: no radius factor up to 0.75*1.25^39 covers the grid");
}

Covering make_covering(const CoveringParams& params, const GridSpec& grid) {
  if (params.alpha == 1.0) return dyadic_covering(grid, params.margin);
  if (params.radius_factor <= 0.0) return calibrate_covering(params, grid);
  return build_covering(params, grid);
}

}  // namespace amod
