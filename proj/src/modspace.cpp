#include "amod/modspace.hpp"

#include <cmath>
#include <sstream>

#include "amod/errors.hpp"

namespace amod {

void SpaceParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("space: alpha must lie in [0, 1]");
  if (!std::isfinite(s)) throw std::invalid_argument("space: s must be finite");
  if (p.size() == 0) throw std::invalid_argument("space: p is empty");
  if (!(q > 0.0)) throw std::invalid_argument("space: q must be positive");
}

double lq_combine(std::span<const double> terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms) s += std::pow(t, q);
  return std::pow(s, 1.0 / q);
}

double BandProfile::combine() const {
  std::vector<double> t;
  t.reserve(rows.size());
  for (const auto& r : rows) t.push_back(r.weighted);
  return lq_combine(t, q);
}

SampledField band_project(const Spectrum& F, const BapuFamily& bapu, std::size_t w) {
  if (!(F.grid == bapu.grid())) throw std::invalid_argument("band_project: field grid differs from the BAPU grid");
  if (w >= bapu.size()) throw std::out_of_range("band_project: window index");
  Spectrum out(F.grid);
  const auto& win = bapu.windows()[w];
  for (std::size_t i = 0; i < win.nodes.size(); ++i) out.values[win.nodes[i]] = win.values[i] * F.values[win.nodes[i]];
  return inverse_transform(out);
}

SampledField band_project(const SampledField& f, const BapuFamily& bapu, std::size_t w) {
  if (!(f.grid == bapu.grid())) throw std::invalid_argument("band_project: field grid differs from the BAPU grid");
  return band_project(forward_transform(f), bapu, w);
}

BandProfile band_profile(const SampledField& f, const BapuFamily& bapu, const SpaceParams& params,
                         double tail_tolerance) {
  params.validate();
  if (!(f.grid == bapu.grid())) throw std::invalid_argument("band_profile: field grid differs from the BAPU grid");
  if (static_cast<int>(params.p.size()) != f.grid.dim)
    throw std::invalid_argument("band_profile: exponent count differs from grid dimension");
  if (std::abs(bapu.covering().alpha() - params.alpha) > 1e-12)
    throw std::invalid_argument("band_profile: BAPU alpha differs from the space alpha");

  const Spectrum F = forward_transform(f);
  BandProfile prof;
  prof.q = params.q;
  prof.tail_fraction = spectral_tail_fraction(F, bapu.covering().covered_radius);
  if (prof.tail_fraction > tail_tolerance) {
    std::ostringstream os;
    os << "modulation norm: spectral energy fraction " << prof.tail_fraction << " outside |xi| <= "
       << bapu.covering().covered_radius << " exceeds " << tail_tolerance;
    throw GuardViolation(os.str());
  }

  for (std::size_t w = 0; w < bapu.size(); ++w) {
    const auto& patch = bapu.patch(w);
    BandRow row;
    row.window = w;
    row.index = patch.index;
    row.scale = patch.scale;
    row.band_norm = mixed_norm(band_project(F, bapu, w), params.p);
    row.weighted = std::pow(row.scale, params.s) * row.band_norm;
    prof.rows.push_back(std::move(row));
  }
  return prof;
}

double modulation_norm(const SampledField& f, const BapuFamily& bapu, const SpaceParams& params,
                       double tail_tolerance) {
  return band_profile(f, bapu, params, tail_tolerance).combine();
}

BapuFamily make_bapu(const SpaceParams& params, const GridSpec& grid, CoveringParams covering) {
  params.validate();
  covering.alpha = params.alpha;
  return build_bapu(make_covering(covering, grid));
}

}  // namespace amod
