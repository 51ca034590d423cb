#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/dendrite.hpp"

namespace hyperlab {

using PlanePoint = std::complex<double>;

/// Extended-plane point; Infinity is the north pole of the chordal sphere.
struct SpherePoint {
  bool infinite = false;
  PlanePoint z{0.0, 0.0};

  static SpherePoint finite(PlanePoint z) { return {false, z}; }
  static SpherePoint infinity() { return {true, {}}; }
};

/// Chordal metric: 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), d(z, inf) = 2/sqrt(1+|z|^2).
double chordal(const SpherePoint& a, const SpherePoint& b);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Unit-sphere embedding realizing the chordal metric as Euclidean distance.
Vec3 embed(const SpherePoint& p);

/// Straight plane segment (possibly degenerate) or a ray to infinity.
struct SpherePiece {
  PlanePoint a{0.0, 0.0};
  PlanePoint b{0.0, 0.0};  // rays: unit direction instead of an endpoint
  bool ray = false;

  friend bool operator==(const SpherePiece&, const SpherePiece&) = default;
};

/// Continuum on the sphere built from plane segments and rays; rays force
/// the point at infinity in (closedness).  Connectivity is the builders'
/// responsibility; all operations are set-wise.
class SphereContinuum {
 public:
  SphereContinuum() = default;

  static SphereContinuum polyline(const std::vector<PlanePoint>& vertices,
                                  bool closed = false);
  static SphereContinuum point(PlanePoint z);
  /// Full great circle through 0 and infinity at the given direction.
  static SphereContinuum line_through_origin(PlanePoint unit_dir);
  static SphereContinuum ray(PlanePoint origin, PlanePoint unit_dir);

  void add_segment(PlanePoint a, PlanePoint b);
  void add_ray(PlanePoint origin, PlanePoint unit_dir);
  void add_point(PlanePoint z);
  void set_infinity(bool on) { has_inf_ = on; }
  void merge(const SphereContinuum& other);

  const std::vector<SpherePiece>& pieces() const { return pieces_; }
  bool has_infinity() const { return has_inf_; }

  /// Image under z -> s z (exact when s is a power of two).
  SphereContinuum scaled(double s) const;

  friend bool operator==(const SphereContinuum&, const SphereContinuum&) = default;

 private:
  std::vector<SpherePiece> pieces_;
  bool has_inf_ = false;
};

/// North-South model map z -> z/2 (direction +1) or z -> 2z (direction -1).
SpherePoint ns_map(const SpherePoint& z, int direction);
SphereContinuum ns_map(const SphereContinuum& c, int direction);

/// Exact chordal distance from a point to one piece (circle-arc projection
/// in the embedding).
double point_to_piece(const Vec3& p, const SpherePiece& piece);
double point_to_continuum(const SpherePoint& p, const SphereContinuum& c);

/// Certified bracket for sup_{x in a} d(x, b); pieces of `a` that appear
/// bitwise in `b` contribute zero and are skipped.
struct SupBracket {
  double lower = 0.0;
  double upper = 0.0;
};
SupBracket directed_hausdorff_sup(const SphereContinuum& a, const SphereContinuum& b,
                                  double eta);

struct SphereHausdorff {
  double value = 0.0;  // midpoint of the bracket
  double error = 0.0;  // half-width; value is within error of the true d_H
  double upper = 0.0;
};
SphereHausdorff hausdorff_sphere(const SphereContinuum& a, const SphereContinuum& b,
                                 double eta);

/// Invariant ray through x: the closure of the orbit of any arc [x/2, x].
SphereContinuum build_fixed_spine(PlanePoint x);

struct PeriodicContinuumReport {
  SphereContinuum continuum;
  double defect = 0.0;        // certified upper bound for d_H(step^N K, K)
  double period_check = 0.0;  // d_H(step^{2N} K, K) upper bound
};

/// Windowed orbit closure of a detour joining x to f^N(x); the detour must
/// avoid the intermediate orbit points.
PeriodicContinuumReport build_periodic_continuum(int N, PlanePoint x,
                                                 const std::vector<PlanePoint>& detour,
                                                 int window);

struct HomoclinicSphereReport {
  SphereContinuum spine;    // P
  SphereContinuum witness;  // K = P u beta
  std::vector<double> approach_to_spine;  // d_H(step^n K, P), n = -W..W
  double eta_floor = 0.0;                 // min_{1<=n<=W} d_H(step^n K, K)
  std::vector<double> approximant_gap;    // d_H(K_n, K)
  std::vector<double> approximant_return; // d_H(step^n K_n, K)
};

HomoclinicSphereReport build_homoclinic_witness(PlanePoint x,
                                                const std::vector<PlanePoint>& beta,
                                                int window);

struct ConjugacyReport {
  int mesh_points = 0;
  double max_residual = 0.0;  // sup over mesh of d(H(f(v)), F(H(v)))
  std::vector<double> radii;  // continuity probe radii
  std::vector<double> sink_modulus;    // sup near 0 of distance to H(0)
  std::vector<double> source_modulus;  // sup near infinity of distance to H(inf)
  std::vector<double> joint_modulus;   // sup near x of image spread around H(x)
};

/// Checks H o f = F o H for the block conjugacy H between the windowed orbit
/// of gamma u beta and the dendrite model; H maps the sink to the attracting
/// spine end (+1, 0) and the source to (-1, 0).
ConjugacyReport special_dendrite_conjugacy(PlanePoint x,
                                           const std::vector<PlanePoint>& beta,
                                           int window, int mesh_per_block);

enum class SphereVerdict { kFalsified, kInconclusive };

struct SphereCandidateFailure {
  std::string family;
  double p1 = 0.0, p2 = 0.0;
  int index = 0;
  double margin = 0.0;
  int route = 0;  // 0 index-0 Hausdorff, 1 fixed-point witness, 2 wedge witness
};

struct SphereFalsification {
  double epsilon = 0.0;
  double delta = 0.0;
  double wedge_angle = 0.0;
  std::uint64_t candidates_tested = 0;
  std::uint64_t survivors = 0;
  double worst_margin = 0.0;
  SphereVerdict verdict = SphereVerdict::kInconclusive;
  double pseudo_orbit_max_gap = 0.0;
  std::vector<SphereCandidateFailure> failures;  // kept when requested
  bool keep_failures = false;
  std::uint64_t audit_samples = 0;
  bool audit_ok = true;
};

/// Parametric non-shadowing sweep for the splice pseudo-orbit through the
/// real great circle: lines, circles through 0, radial segments, rays,
/// chords and notched near-real polylines.
SphereFalsification sphere_nonshadowing_certificate(double epsilon, double delta,
                                                    int window, double wedge_angle,
                                                    std::size_t family_scale,
                                                    bool keep_failures = false,
                                                    std::uint64_t audit_seed = 31);

}  // namespace hyperlab
