#include "hyperlab/circle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperlab {

double CirclePoint::normalize(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // guards against rounding of tiny negatives
  return r;
}

double circle_distance(CirclePoint a, CirclePoint b) {
  double d = std::fabs(a.coord() - b.coord());
  return std::min(d, 1.0 - d);
}

CircleContinuum CircleContinuum::point(CirclePoint p) {
  return CircleContinuum(ContinuumKind::kPoint, p, p);
}

CircleContinuum CircleContinuum::arc(CirclePoint a, CirclePoint b) {
  if (a == b)
    throw std::invalid_argument(
        "degenerate arc: use CircleContinuum::point or full_circle");
  return CircleContinuum(ContinuumKind::kArc, a, b);
}

CircleContinuum CircleContinuum::full_circle() {
  return CircleContinuum(ContinuumKind::kFullCircle, CirclePoint(), CirclePoint());
}

double CircleContinuum::length() const {
  switch (kind_) {
    case ContinuumKind::kPoint:
      return 0.0;
    case ContinuumKind::kFullCircle:
      return 1.0;
    case ContinuumKind::kArc:
      return CirclePoint::normalize(b_.coord() - a_.coord());
  }
  return 0.0;
}

bool CircleContinuum::contains(CirclePoint x) const {
  switch (kind_) {
    case ContinuumKind::kPoint:
      return x == a_;
    case ContinuumKind::kFullCircle:
      return true;
    case ContinuumKind::kArc:
      return CirclePoint::normalize(x.coord() - a_.coord()) <= length();
  }
  return false;
}

double distance_to(const CircleContinuum& c, CirclePoint x) {
  switch (c.kind()) {
    case ContinuumKind::kFullCircle:
      return 0.0;
    case ContinuumKind::kPoint:
      return circle_distance(x, c.a());
    case ContinuumKind::kArc: {
      if (c.contains(x)) return 0.0;
      double past_b = CirclePoint::normalize(x.coord() - c.b().coord());
      double before_a = CirclePoint::normalize(c.a().coord() - x.coord());
      return std::min(past_b, before_a);
    }
  }
  return 0.0;
}

MorseSmaleCircleMap::MorseSmaleCircleMap(int pairs, double amplitude,
                                         Orientation orientation)
    : pairs_(pairs), amplitude_(amplitude), orientation_(orientation) {
  if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
  double m = 2.0 * std::numbers::pi * pairs * amplitude;
  if (!(m > 0.0 && m < 1.0))
    throw std::invalid_argument("amplitude must satisfy 0 < 2*pi*k*A < 1");
}

double MorseSmaleCircleMap::lipschitz() const {
  return 1.0 + 2.0 * std::numbers::pi * pairs_ * amplitude_;
}

double MorseSmaleCircleMap::derivative(CirclePoint x) const {
  double w = 2.0 * std::numbers::pi * pairs_;
  return 1.0 + w * amplitude_ * std::cos(w * x.coord());
}

double MorseSmaleCircleMap::core_lift(double x) const {
  return x + amplitude_ * std::sin(2.0 * std::numbers::pi * pairs_ * x);
}

CirclePoint MorseSmaleCircleMap::eval(CirclePoint x) const {
  double y = core_lift(x.coord());
  if (orientation_ == Orientation::kReversing) y = -y;
  return CirclePoint(y);
}

CirclePoint MorseSmaleCircleMap::invert(CirclePoint y, double tol) const {
  if (!(tol > 0.0)) throw std::invalid_argument("invert: tol must be > 0");
  double target = y.coord();
  if (orientation_ == Orientation::kReversing)
    target = CirclePoint::normalize(-target);
  // core_lift is strictly increasing on [0,1] with values 0 at 0 and 1 at 1.
  double lo = 0.0, hi = 1.0;
  int it = 0;
  while (hi - lo > 0.5 * tol) {
    if (++it > kInverseIterCap)
      throw std::runtime_error("invert: bisection failed to converge");
    double mid = 0.5 * (lo + hi);
    if (core_lift(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return CirclePoint(0.5 * (lo + hi));
}

CirclePoint MorseSmaleCircleMap::iterate(CirclePoint x, long n, double tol) const {
  CirclePoint p = x;
  for (long i = 0; i < n; ++i) p = eval(p);
  for (long i = 0; i > n; --i) p = invert(p, tol);
  return p;
}

std::vector<FixedPointInfo> MorseSmaleCircleMap::fixed_points() const {
  std::vector<FixedPointInfo> out;
  if (orientation_ == Orientation::kPreserving) {
    // sin(2 pi k x) vanishes exactly at j/(2k); derivative 1 +- 2 pi k A there.
    for (int j = 0; j < 2 * pairs_; ++j) {
      CirclePoint p(static_cast<double>(j) / (2.0 * pairs_));
      Stability s = (j % 2 == 0) ? Stability::kRepeller : Stability::kAttractor;
      out.push_back({p, s, 1});
    }
    return out;
  }
  // Reversing: locate fixed points of f^2 by sign changes of the
  // displacement, then classify period and stability numerically.
  auto disp2 = [&](double x) {
    CirclePoint fx = eval(eval(CirclePoint(x)));
    double d = fx.coord() - CirclePoint::normalize(x);
    if (d > 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    return d;
  };
  const int grid = 4096 * pairs_;
  for (int i = 0; i < grid; ++i) {
    double x0 = static_cast<double>(i) / grid;
    double x1 = static_cast<double>(i + 1) / grid;
    double d0 = disp2(x0), d1 = disp2(x1);
    // skip the wrap discontinuity of the signed displacement
    if (std::fabs(d0) > 0.25 || std::fabs(d1) > 0.25) continue;
    double lo = x0, hi = x1;
    if (d0 == 0.0) {
      hi = x0;
    } else if (d0 * d1 < 0.0) {
      for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if (disp2(lo) * disp2(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
    } else {
      continue;
    }
    CirclePoint root(0.5 * (lo + hi));
    bool dup = false;
    for (const auto& fp : out)
      if (circle_distance(fp.point, root) < 1e-9) dup = true;
    if (dup) continue;
    int period = circle_distance(eval(root), root) < 1e-9 ? 1 : 2;
    double h = 1e-6;
    double der2 = circle_distance(eval(eval(CirclePoint(root.coord() + h))),
                                  eval(eval(CirclePoint(root.coord() - h)))) /
                  (2.0 * h);
    Stability s = der2 < 1.0 ? Stability::kAttractor : Stability::kRepeller;
    out.push_back({root, s, period});
  }
  return out;
}

CircleContinuum MorseSmaleCircleMap::image(const CircleContinuum& c) const {
  switch (c.kind()) {
    case ContinuumKind::kFullCircle:
      return c;
    case ContinuumKind::kPoint:
      return CircleContinuum::point(eval(c.a()));
    case ContinuumKind::kArc: {
      CirclePoint fa = eval(c.a()), fb = eval(c.b());
      // injectivity keeps fa != fb mathematically; at double precision a
      // contracting arc can collapse, and then the canonical form is a point
      if (fa == fb) return CircleContinuum::point(fa);
      return orientation_ == Orientation::kPreserving
                 ? CircleContinuum::arc(fa, fb)
                 : CircleContinuum::arc(fb, fa);
    }
  }
  return c;
}

CircleContinuum MorseSmaleCircleMap::preimage(const CircleContinuum& c,
                                              double tol) const {
  switch (c.kind()) {
    case ContinuumKind::kFullCircle:
      return c;
    case ContinuumKind::kPoint:
      return CircleContinuum::point(invert(c.a(), tol));
    case ContinuumKind::kArc: {
      CirclePoint ia = invert(c.a(), tol), ib = invert(c.b(), tol);
      if (ia == ib) return CircleContinuum::point(ia);
      return orientation_ == Orientation::kPreserving
                 ? CircleContinuum::arc(ia, ib)
                 : CircleContinuum::arc(ib, ia);
    }
  }
  return c;
}

}  // namespace hyperlab
