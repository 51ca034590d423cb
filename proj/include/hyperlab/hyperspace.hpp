#pragma once

#include <algorithm>
#include <vector>

#include "hyperlab/circle.hpp"

namespace hyperlab {

/// Hausdorff distance with provenance: exact closed form or a discretized
/// evaluation at resolution eta (error bound 2*eta).
struct HausdorffValue {
  double value = 0.0;
  bool exact = true;
  double eta = 0.0;

  static HausdorffValue exact_value(double v) { return {v, true, 0.0}; }
  static HausdorffValue discretized(double v, double eta) { return {v, false, eta}; }
};

/// max of the two directed sup-min distances between nonempty finite sets.
template <class P, class Metric>
double hausdorff_finite_value(const std::vector<P>& a, const std::vector<P>& b,
                              Metric d) {
  auto directed = [&](const std::vector<P>& from, const std::vector<P>& to) {
    double worst = 0.0;
    for (const P& x : from) {
      double best = d(x, to.front());
      for (std::size_t i = 1; i < to.size(); ++i)
        best = std::min(best, d(x, to[i]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Canonical finite subset of the circle: sorted, deduplicated within
/// kDedupTol (including across the 0/1 wrap), never empty.
class CircleSubset {
 public:
  explicit CircleSubset(std::vector<CirclePoint> pts);

  const std::vector<CirclePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool contains(CirclePoint x, double tol = kDedupTol) const;
  CircleSubset united(const CircleSubset& other) const;

  friend bool operator==(const CircleSubset&, const CircleSubset&) = default;

 private:
  std::vector<CirclePoint> points_;
};

double distance_to(const CircleSubset& a, CirclePoint x);

HausdorffValue hausdorff_finite(const CircleSubset& a, const CircleSubset& b);
double hausdorff_finite_value(const CircleSubset& a, const CircleSubset& b);

/// Exact Hausdorff distance between circle continua via component analysis:
/// d(., C) is a single-peaked tent on the complement of C, so the directed
/// sup is attained at an endpoint of the other continuum or at the tent peak.
double hausdorff_continua_value(const CircleContinuum& a, const CircleContinuum& b);
HausdorffValue hausdorff_continua(const CircleContinuum& a, const CircleContinuum& b);

/// Pointwise image under the base map, re-canonicalized (2^f on finite sets).
CircleSubset induced_2f_step(const MorseSmaleCircleMap& m, const CircleSubset& a);
CircleSubset induced_2f_inverse_step(const MorseSmaleCircleMap& m, const CircleSubset& a);

/// C(f) on representable continua; delegates to the endpoint image.
CircleContinuum induced_Cf_step(const MorseSmaleCircleMap& m, const CircleContinuum& c);

bool neighborhood_contains(const CircleSubset& a, double r, CirclePoint x);
bool neighborhood_contains(const CircleContinuum& c, double r, CirclePoint x);

}  // namespace hyperlab
