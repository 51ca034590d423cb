#include "hyperlab/entropy.hpp"

#include <stdexcept>

#include "hyperlab/rng.hpp"

namespace hyperlab {

double tail_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("tail_slope: need >= 2 points");
  double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MetricSystem<CirclePoint> circle_point_system(const MorseSmaleCircleMap& m) {
  MetricSystem<CirclePoint> sys;
  sys.name = "circle_ms";
  sys.metric = [](const CirclePoint& a, const CirclePoint& b) {
    return circle_distance(a, b);
  };
  sys.forward = [m](const CirclePoint& x) { return m.eval(x); };
  sys.inverse = [m](const CirclePoint& x) { return m.invert(x); };
  sys.sample = [](std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<CirclePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(rng.uniform01());
    return out;
  };
  return sys;
}

MetricSystem<CirclePoint> rigid_rotation_system(double alpha) {
  MetricSystem<CirclePoint> sys;
  sys.name = "rotation";
  sys.metric = [](const CirclePoint& a, const CirclePoint& b) {
    return circle_distance(a, b);
  };
  sys.forward = [alpha](const CirclePoint& x) { return CirclePoint(x.coord() + alpha); };
  sys.inverse = [alpha](const CirclePoint& x) { return CirclePoint(x.coord() - alpha); };
  sys.sample = [](std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<CirclePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(rng.uniform01());
    return out;
  };
  return sys;
}

MetricSystem<CircleContinuum> circle_arc_system(const MorseSmaleCircleMap& m) {
  MetricSystem<CircleContinuum> sys;
  sys.name = "circle_cf_arcs";
  sys.metric = [](const CircleContinuum& a, const CircleContinuum& b) {
    return hausdorff_continua_value(a, b);
  };
  sys.forward = [m](const CircleContinuum& c) { return m.image(c); };
  sys.inverse = [m](const CircleContinuum& c) { return m.preimage(c); };
  sys.sample = [](std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<CircleContinuum> out;
    out.reserve(count);
    while (out.size() < count) {
      CirclePoint a(rng.uniform01()), b(rng.uniform01());
      if (a == b) continue;
      out.push_back(CircleContinuum::arc(a, b));
    }
    return out;
  };
  return sys;
}

namespace {

// Base points must sit strictly inside one complementary interval of the
// fixed set (a single basin-crossing component).
void require_single_component(const MorseSmaleCircleMap& m,
                              const std::vector<CirclePoint>& bases) {
  if (bases.empty()) throw std::invalid_argument("no base points");
  auto fps = m.fixed_points();
  auto interval_of = [&](CirclePoint x) {
    for (std::size_t j = 0; j < fps.size(); ++j) {
      double lo = fps[j].point.coord();
      double hi = fps[(j + 1) % fps.size()].point.coord();
      double len = CirclePoint::normalize(hi - lo);
      if (len == 0.0) len = 1.0;
      double off = CirclePoint::normalize(x.coord() - lo);
      if (off > 1e-9 && off < len - 1e-9) return j;
    }
    throw std::invalid_argument("base point lies on the fixed set");
  };
  std::size_t first = interval_of(bases.front());
  for (const auto& b : bases)
    if (interval_of(b) != first)
      throw std::invalid_argument("base points span several components");
}

}  // namespace

OrbitGridCoding coding_phi_finite(const MorseSmaleCircleMap& m,
                                  const std::vector<CirclePoint>& bases,
                                  const CircleSubset& A, int window) {
  if (window < 0) throw std::invalid_argument("window >= 0 required");
  require_single_component(m, bases);

  OrbitGridCoding out;
  out.r = static_cast<int>(bases.size());
  out.window = window;
  // forward-consistent chains: fill from the deepest backward point so that
  // eval maps each tabulated entry bitwise onto the next one
  for (const auto& y : bases) {
    CirclePoint z = y;
    for (int i = 0; i < window; ++i) z = m.invert(z);
    std::vector<CirclePoint> row(static_cast<std::size_t>(2 * window + 1));
    row[0] = z;
    for (int i = 1; i <= 2 * window; ++i)
      row[static_cast<std::size_t>(i)] = m.eval(row[static_cast<std::size_t>(i - 1)]);
    out.grid.push_back(std::move(row));
  }
  // membership is decided at kMemberTol, so the grid itself must stay
  // pairwise separated beyond twice that scale (distinct orbits, and a
  // window shallow enough that the attractor tail has not collapsed)
  constexpr double kMemberTol = 1e-9;
  std::vector<CirclePoint> flat;
  for (const auto& row : out.grid) flat.insert(flat.end(), row.begin(), row.end());
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = i + 1; j < flat.size(); ++j)
      if (circle_distance(flat[i], flat[j]) < 2.0 * kMemberTol)
        throw std::runtime_error(
            "coding_phi_finite: ambiguous membership, tighten the construction");

  for (int k = 0; k < out.r; ++k) {
    std::vector<std::uint8_t> row(static_cast<std::size_t>(2 * window + 1), 0);
    for (int i = 0; i <= 2 * window; ++i) {
      double dmin = 1.0;
      for (const auto& a : A.points())
        dmin = std::min(dmin,
                        circle_distance(a, out.grid[static_cast<std::size_t>(k)]
                                               [static_cast<std::size_t>(i)]));
      if (dmin <= kMemberTol) row[static_cast<std::size_t>(i)] = 1;
    }
    out.bits.push_back(std::move(row));
  }
  return out;
}

ExactSeparatedFamily exact_separated_lower_bound_coding(const MorseSmaleCircleMap& m,
                                                        int r, int n) {
  if (r < 1 || n < 1) throw std::invalid_argument("r, n >= 1 required");
  if (r * n > 12)
    throw std::invalid_argument("r*n > 12: family too large to materialize");

  ExactSeparatedFamily fam;
  fam.r = r;
  fam.n = n;

  // bases spread through the middle of the first basin interval
  auto fps = m.fixed_points();
  double lo = fps[0].point.coord();
  double len = CirclePoint::normalize(fps[1].point.coord() - lo);
  for (int k = 0; k < r; ++k)
    fam.bases.emplace_back(lo + len * (0.30 + 0.25 * (k + 1.0) / (r + 1.0)));

  // orbit grid over [0, 2n) so the iterated subsets stay on tabulated points
  std::vector<std::vector<CirclePoint>> grid;
  for (const auto& y : fam.bases) {
    std::vector<CirclePoint> row{y};
    for (int i = 1; i < 2 * n; ++i) row.push_back(m.eval(row.back()));
    grid.push_back(row);
  }
  std::vector<CirclePoint> anchors{fps[0].point, fps[1].point};

  // delta certificate: half the minimum spacing over grid points + anchors
  std::vector<CirclePoint> all;
  for (const auto& row : grid)
    for (int i = 0; i < n; ++i) all.push_back(row[static_cast<std::size_t>(i)]);
  all.insert(all.end(), anchors.begin(), anchors.end());
  double spacing = 1.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      spacing = std::min(spacing, circle_distance(all[i], all[j]));
  fam.min_spacing = spacing;
  if (spacing < 2e-9)
    throw std::runtime_error(
        "exact_separated_lower_bound_coding: orbit grid spacing collapsed");
  fam.delta = 0.5 * spacing;

  const std::uint64_t count = 1ull << (r * n);
  for (std::uint64_t pattern = 0; pattern < count; ++pattern) {
    std::vector<CirclePoint> pts = anchors;
    for (int k = 0; k < r; ++k)
      for (int i = 0; i < n; ++i)
        if (pattern & (1ull << (k * n + i)))
          pts.push_back(grid[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
    fam.subsets.emplace_back(pts);
  }
  // count is exactly 2^{r n}, so log(count)/n reduces to r log 2
  fam.estimate = r * std::log(2.0);
  fam.estimate_naive = std::log(static_cast<double>(count)) / n;
  return fam;
}

double verify_exact_family(const MorseSmaleCircleMap& m,
                           const ExactSeparatedFamily& fam) {
  // d_n under 2^f: iterate every subset through the induced map n-1 times
  std::vector<std::vector<CircleSubset>> orbits;
  orbits.reserve(fam.subsets.size());
  for (const auto& A : fam.subsets) {
    std::vector<CircleSubset> row{A};
    for (int i = 1; i < fam.n; ++i) row.push_back(induced_2f_step(m, row.back()));
    orbits.push_back(std::move(row));
  }
  double min_dn = 1.0;
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (std::size_t j = i + 1; j < orbits.size(); ++j) {
      double dn = 0.0;
      for (int t = 0; t < fam.n; ++t)
        dn = std::max(dn, hausdorff_finite_value(orbits[i][static_cast<std::size_t>(t)],
                                                 orbits[j][static_cast<std::size_t>(t)]));
      min_dn = std::min(min_dn, dn);
    }
  return min_dn;
}

}  // namespace hyperlab
