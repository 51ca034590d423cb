#include "hyperlab/hyperspace.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperlab {

CircleSubset::CircleSubset(std::vector<CirclePoint> pts) : points_(std::move(pts)) {
  if (points_.empty()) throw std::invalid_argument("CircleSubset: empty");
  std::sort(points_.begin(), points_.end());
  std::vector<CirclePoint> kept;
  for (const auto& p : points_) {
    if (kept.empty() || circle_distance(kept.back(), p) > kDedupTol)
      kept.push_back(p);
  }
  // wrap-around duplicate: last point within tolerance of the first
  if (kept.size() > 1 && circle_distance(kept.front(), kept.back()) <= kDedupTol)
    kept.pop_back();
  points_ = std::move(kept);
}

bool CircleSubset::contains(CirclePoint x, double tol) const {
  for (const auto& p : points_)
    if (circle_distance(p, x) <= tol) return true;
  return false;
}

CircleSubset CircleSubset::united(const CircleSubset& other) const {
  std::vector<CirclePoint> all = points_;
  all.insert(all.end(), other.points_.begin(), other.points_.end());
  return CircleSubset(std::move(all));
}

double distance_to(const CircleSubset& a, CirclePoint x) {
  double best = circle_distance(a.points().front(), x);
  for (std::size_t i = 1; i < a.points().size(); ++i)
    best = std::min(best, circle_distance(a.points()[i], x));
  return best;
}

double hausdorff_finite_value(const CircleSubset& a, const CircleSubset& b) {
  return hausdorff_finite_value(a.points(), b.points(),
                                [](CirclePoint x, CirclePoint y) {
                                  return circle_distance(x, y);
                                });
}

HausdorffValue hausdorff_finite(const CircleSubset& a, const CircleSubset& b) {
  return HausdorffValue::exact_value(hausdorff_finite_value(a, b));
}

namespace {

// Location and height of the unique local maximum of x |-> d(x, c), which
// sits midway across the complement of c.  Meaningless for the full circle.
struct TentPeak {
  CirclePoint at;
  double height;
};

TentPeak tent_peak(const CircleContinuum& c) {
  if (c.kind() == ContinuumKind::kPoint)
    return {CirclePoint(c.a().coord() + 0.5), 0.5};
  double gap = 1.0 - c.length();
  return {CirclePoint(c.b().coord() + 0.5 * gap), 0.5 * gap};
}

double directed_continuum(const CircleContinuum& from, const CircleContinuum& to) {
  if (to.kind() == ContinuumKind::kFullCircle) return 0.0;
  TentPeak peak = tent_peak(to);
  switch (from.kind()) {
    case ContinuumKind::kPoint:
      return distance_to(to, from.a());
    case ContinuumKind::kFullCircle:
      return peak.height;
    case ContinuumKind::kArc: {
      double v = std::max(distance_to(to, from.a()), distance_to(to, from.b()));
      if (from.contains(peak.at)) v = std::max(v, peak.height);
      return v;
    }
  }
  return 0.0;
}

}  // namespace

double hausdorff_continua_value(const CircleContinuum& a, const CircleContinuum& b) {
  return std::max(directed_continuum(a, b), directed_continuum(b, a));
}

HausdorffValue hausdorff_continua(const CircleContinuum& a, const CircleContinuum& b) {
  return HausdorffValue::exact_value(hausdorff_continua_value(a, b));
}

CircleSubset induced_2f_step(const MorseSmaleCircleMap& m, const CircleSubset& a) {
  std::vector<CirclePoint> out;
  out.reserve(a.size());
  for (const auto& p : a.points()) out.push_back(m.eval(p));
  return CircleSubset(std::move(out));
}

CircleSubset induced_2f_inverse_step(const MorseSmaleCircleMap& m,
                                     const CircleSubset& a) {
  std::vector<CirclePoint> out;
  out.reserve(a.size());
  for (const auto& p : a.points()) out.push_back(m.invert(p));
  return CircleSubset(std::move(out));
}

CircleContinuum induced_Cf_step(const MorseSmaleCircleMap& m,
                                const CircleContinuum& c) {
  return m.image(c);
}

bool neighborhood_contains(const CircleSubset& a, double r, CirclePoint x) {
  if (!(r > 0.0)) throw std::invalid_argument("neighborhood radius must be > 0");
  return distance_to(a, x) < r;
}

bool neighborhood_contains(const CircleContinuum& c, double r, CirclePoint x) {
  if (!(r > 0.0)) throw std::invalid_argument("neighborhood radius must be > 0");
  return distance_to(c, x) < r;
}

}  // namespace hyperlab
