#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "hyperlab/symbolic.hpp"

namespace hyperlab {

/// Node abscissa a_n: a_0 = 0, a_n = 1 - 1/(n+1) for n > 0, a_{-n} = -a_n.
double dendrite_anchor(long n);
/// Length of the vertical leg at node n: 1/(|n|+1).
double dendrite_leg_length(long n);

/// Point of the dendrite: on the spine [-1,1] x {0} or on a vertical leg at
/// a node.  Leg height 0 canonicalizes to the spine point.
struct DendritePoint {
  enum class Kind { kSpine, kLeg };
  Kind kind = Kind::kSpine;
  double x = 0.0;  // spine coordinate
  long leg = 0;    // node index
  double h = 0.0;  // height along the leg

  static DendritePoint spine(double x);
  static DendritePoint on_leg(long n, double h);
  /// Ambient plane coordinates.
  std::pair<double, double> ambient() const;

  friend bool operator==(const DendritePoint&, const DendritePoint&) = default;
};

/// Ambient Euclidean distance.
double dendrite_distance(const DendritePoint& a, const DendritePoint& b);

/// The homeomorphism advancing nodes: affine on each spine block
/// [a_n, a_{n+1}] -> [a_{n+1}, a_{n+2}], linear tip-to-tip on legs, with
/// both spine endpoints fixed.
DendritePoint F_eval(const DendritePoint& p);
DendritePoint F_inverse(const DendritePoint& p);

/// Closed connected subtree anchored on the spine: a spine interval and
/// spine-touching leg stubs whose nodes lie inside it.
class Subtree {
 public:
  /// Degenerate interval (u == v) is a single spine point.
  Subtree(double u, double v, std::map<long, double> leg_heights = {});

  double spine_lo() const { return u_; }
  double spine_hi() const { return v_; }
  const std::map<long, double>& legs() const { return legs_; }

  Subtree image(int direction) const;  // direction +1 applies F, -1 applies F^{-1}

  friend bool operator==(const Subtree&, const Subtree&) = default;

 private:
  double u_, v_;
  std::map<long, double> legs_;  // node -> stub height in (0, leg length]
};

Subtree subtree_image(const Subtree& s, int direction);

/// Exact Euclidean Hausdorff distance between subtrees.  Leg suprema are
/// attained at leg tips (distance to a grounded subtree never decreases with
/// height), spine suprema at interval endpoints.
double hausdorff_subtrees(const Subtree& s1, const Subtree& s2);

double distance_to_subtree(const DendritePoint& p, const Subtree& s);

/// Subtree with leg-j stub of height sigma_j / (k (j+1)) for j < n and spine
/// [a_0, a_{n-1}]; one value per address sigma in {1..k}^n.
Subtree build_C_sigma(int k, int n, const std::vector<int>& sigma);

struct CSigmaCertificate {
  int k = 0;
  int n = 0;
  double delta = 0.0;       // the requested separation threshold
  double delta_star = 0.0;  // min over pairs of max_j d_H(F^{-j}., F^{-j}.)
  std::size_t count = 0;    // k^n subtrees
  std::size_t pairs = 0;
  bool all_separated = false;  // delta_star > delta
  double log_count_rate = 0.0;  // log(count)/n
};

/// Exhaustive pairwise verification that the C_sigma family is separated
/// under the inverse-map d_n.  delta <= 0 selects the default
/// 0.9 * min(1/k, 1/2).
CSigmaCertificate verify_C_sigma_separation(int k, int n, double delta = 0.0);

/// Full-cone code: selected whole legs (family i at node index n*r + i) over
/// the full spine; the step map advances every selection by one slot.
struct FullConeCode {
  int r = 1;
  std::set<std::pair<int, long>> selected;  // (family, slot)

  friend bool operator==(const FullConeCode&, const FullConeCode&) = default;
};

FullConeCode fullcone_step(const FullConeCode& code, int direction);
BitTupleSeq fullcone_phi(const FullConeCode& code);
FullConeCode fullcone_decode(const BitTupleSeq& seq);

/// Geometric realization: spine [-1,1] plus the selected full legs.
Subtree fullcone_geometry(const FullConeCode& code);

/// Positive pairwise-distance floor for decoded window codes: the smallest
/// distance from any in-window leg tip to the rest of the windowed dendrite.
double fullcone_geometry_floor(int r, long window);

/// Pairwise leg-to-leg distance table |a_m - a_m'| for the window (the
/// realized arc families accumulate nowhere inside it).
std::vector<double> leg_separation_table(long window);

}  // namespace hyperlab
