#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace hyperlab {

/// Deduplication tolerance shared by all finite-set canonicalization.
inline constexpr double kDedupTol = 1e-12;

/// Point on the unit circle R/Z; coordinate normalized to [0,1).
class CirclePoint {
 public:
  constexpr CirclePoint() = default;
  explicit CirclePoint(double x) : coord_(normalize(x)) {}

  double coord() const { return coord_; }
  static double normalize(double x);

  friend bool operator==(CirclePoint a, CirclePoint b) = default;
  friend auto operator<=>(CirclePoint a, CirclePoint b) = default;

 private:
  double coord_ = 0.0;
};

/// min(|x-y|, 1-|x-y|), always in [0, 1/2].
double circle_distance(CirclePoint a, CirclePoint b);

enum class ContinuumKind { kPoint, kArc, kFullCircle };

/// Nonempty closed connected subset of the circle: a single point, the arc
/// swept from a to b in the increasing-coordinate direction, or the whole
/// circle.  Arc(a,a) is rejected so every subset has a unique representation.
class CircleContinuum {
 public:
  static CircleContinuum point(CirclePoint p);
  static CircleContinuum arc(CirclePoint a, CirclePoint b);
  static CircleContinuum full_circle();

  ContinuumKind kind() const { return kind_; }
  CirclePoint a() const { return a_; }
  CirclePoint b() const { return b_; }
  /// Arc length in (0,1); 0 for a point, 1 for the full circle.
  double length() const;
  bool contains(CirclePoint x) const;

  friend bool operator==(const CircleContinuum&, const CircleContinuum&) = default;

 private:
  CircleContinuum(ContinuumKind k, CirclePoint a, CirclePoint b)
      : kind_(k), a_(a), b_(b) {}
  ContinuumKind kind_;
  CirclePoint a_, b_;
};

/// d(x, C) in the circle metric.
double distance_to(const CircleContinuum& c, CirclePoint x);

enum class Orientation { kPreserving, kReversing };
enum class Stability { kAttractor, kRepeller };

struct FixedPointInfo {
  CirclePoint point;
  Stability stability;
  int period;  // 1, or 2 when only f^2 fixes the point (reversing case)
};

/// f(x) = x + A sin(2 pi k x) mod 1, reflected through x -> -x when
/// orientation-reversing.  Requires 0 < 2 pi k A < 1 so f is a
/// diffeomorphism with hyperbolic fixed points at j/(2k).
class MorseSmaleCircleMap {
 public:
  static constexpr double kInverseTol = 1e-12;
  static constexpr int kInverseIterCap = 200;

  MorseSmaleCircleMap(int pairs, double amplitude,
                      Orientation orientation = Orientation::kPreserving);

  int pairs() const { return pairs_; }
  double amplitude() const { return amplitude_; }
  Orientation orientation() const { return orientation_; }
  /// Global Lipschitz constant 1 + 2 pi k A.
  double lipschitz() const;
  /// Derivative of the orientation-preserving core at x.
  double derivative(CirclePoint x) const;

  CirclePoint eval(CirclePoint x) const;
  /// Unique preimage, by monotone bisection on the lift; result y' satisfies
  /// circle_distance(f(y'), y) <= tol.  Throws on non-convergence.
  CirclePoint invert(CirclePoint y, double tol = kInverseTol) const;
  /// f^n, using invert with the given tolerance for n < 0.
  CirclePoint iterate(CirclePoint x, long n, double tol = kInverseTol) const;

  /// All periodic points of period <= 2 with stability tags.  Preserving
  /// maps yield exactly 2k period-1 points at j/(2k), alternating
  /// repeller/attractor; reversing maps are resolved numerically on f^2.
  std::vector<FixedPointInfo> fixed_points() const;

  CircleContinuum image(const CircleContinuum& c) const;
  CircleContinuum preimage(const CircleContinuum& c, double tol = kInverseTol) const;

 private:
  double core_lift(double x) const;  // x + A sin(2 pi k x), x in [0,1]
  int pairs_;
  double amplitude_;
  Orientation orientation_;
};

}  // namespace hyperlab
