#include "hyperlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

#include "hyperlab/parallel.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {

namespace {

constexpr Vec3 kNorth{0.0, 0.0, 1.0};

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 mul(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) { return mul(a, 1.0 / norm(a)); }
double dist3(const Vec3& a, const Vec3& b) { return norm(sub(a, b)); }

double cross2(PlanePoint a, PlanePoint b) {
  return a.real() * b.imag() - a.imag() * b.real();
}
double dot2(PlanePoint a, PlanePoint b) {
  return a.real() * b.real() + a.imag() * b.imag();
}

Vec3 embed_plane(PlanePoint z) {
  double n2 = std::norm(z);
  double s = 1.0 + n2;
  return {2.0 * z.real() / s, 2.0 * z.imag() / s, (n2 - 1.0) / s};
}

}  // namespace

double chordal(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.infinite) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
  return 2.0 * std::abs(a.z - b.z) /
         std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

Vec3 embed(const SpherePoint& p) { return p.infinite ? kNorth : embed_plane(p.z); }

namespace {

// Image circle of the supporting line of a piece: diametrically opposite
// points are the north pole and the image of the line's closest approach to
// the origin.  Arc range in angle coordinates with the a-end at angle 0 (or
// 2 pi); the range always spans [lo, hi].
struct ArcGeom {
  bool point = false;
  Vec3 a3, b3;  // endpoint embeddings (b3 = north pole for rays)
  Vec3 center;
  double rho = 0.0;
  Vec3 u, v;          // orthonormal basis of the circle plane
  double lo = 0.0, hi = 0.0;  // angle range of the arc
};

ArcGeom prepare_arc(const SpherePiece& piece) {
  ArcGeom g;
  g.a3 = embed_plane(piece.a);
  if (!piece.ray && piece.a == piece.b) {
    g.point = true;
    g.b3 = g.a3;
    return g;
  }
  PlanePoint dir = piece.ray ? piece.b : piece.b - piece.a;
  double dn = std::abs(dir);
  PlanePoint du = dir / dn;
  // closest approach of the supporting line to the origin
  PlanePoint z0 = piece.a - du * dot2(piece.a, du);
  Vec3 u0 = embed_plane(z0);
  g.center = mul(add(kNorth, u0), 0.5);
  g.rho = 0.5 * dist3(kNorth, u0);
  g.b3 = piece.ray ? kNorth : embed_plane(piece.b);
  if (g.rho < 1e-14) {
    g.point = true;  // whole line chordally collapsed near the pole
    return g;
  }
  Vec3 e1 = sub(u0, kNorth);
  PlanePoint z1 = z0 + du * (1.0 + std::abs(z0));
  Vec3 e2 = sub(embed_plane(z1), kNorth);
  Vec3 n = cross(e1, e2);
  double nn = norm(n);
  if (nn < 1e-18) {
    g.point = true;
    return g;
  }
  n = mul(n, 1.0 / nn);
  g.u = normalized(sub(g.a3, g.center));
  g.v = cross(n, g.u);
  auto angle_of = [&](const Vec3& x) {
    Vec3 w = sub(x, g.center);
    double t = std::atan2(dot(w, g.v), dot(w, g.u));
    if (t < 0.0) t += 2.0 * std::acos(-1.0);
    return t;
  };
  double beta = angle_of(g.b3);
  PlanePoint mid = piece.ray ? piece.a + du * (2.0 * (1.0 + std::abs(piece.a) + std::abs(z0)))
                             : 0.5 * (piece.a + piece.b);
  double mu = angle_of(embed_plane(mid));
  if (beta == 0.0) beta = 2.0 * std::acos(-1.0);
  if (mu <= beta) {
    g.lo = 0.0;
    g.hi = beta;
  } else {
    g.lo = beta;
    g.hi = 2.0 * std::acos(-1.0);
  }
  return g;
}

Vec3 arc_point(const ArcGeom& g, double theta) {
  return add(g.center, add(mul(g.u, g.rho * std::cos(theta)),
                           mul(g.v, g.rho * std::sin(theta))));
}

double point_to_arc(const Vec3& p, const ArcGeom& g) {
  if (g.point) return std::min(dist3(p, g.a3), dist3(p, g.b3));
  Vec3 n = cross(g.u, g.v);
  double h = dot(sub(p, g.center), n);
  Vec3 proj = sub(p, mul(n, h));
  Vec3 w = sub(proj, g.center);
  double wn = norm(w);
  if (wn < 1e-18) return std::sqrt(g.rho * g.rho + h * h);
  double theta = std::atan2(dot(w, g.v), dot(w, g.u));
  if (theta < 0.0) theta += 2.0 * std::acos(-1.0);
  bool inside = theta >= g.lo && theta <= g.hi;
  if (theta == 0.0 && g.lo > 0.0) inside = true;  // the a-end wraps to 2 pi
  if (inside) {
    Vec3 q = add(g.center, mul(w, g.rho / wn));
    return dist3(p, q);
  }
  return std::min(dist3(p, g.a3), dist3(p, g.b3));
}

}  // namespace

double point_to_piece(const Vec3& p, const SpherePiece& piece) {
  return point_to_arc(p, prepare_arc(piece));
}

double point_to_continuum(const SpherePoint& p, const SphereContinuum& c) {
  Vec3 p3 = embed(p);
  double best = c.has_infinity() ? dist3(p3, kNorth) : 1e300;
  for (const auto& piece : c.pieces())
    best = std::min(best, point_to_piece(p3, piece));
  return best;
}

SphereContinuum SphereContinuum::polyline(const std::vector<PlanePoint>& vertices,
                                          bool closed) {
  if (vertices.empty()) throw std::invalid_argument("empty polyline");
  SphereContinuum out;
  if (vertices.size() == 1) {
    out.add_point(vertices[0]);
    return out;
  }
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    out.add_segment(vertices[i], vertices[i + 1]);
  if (closed) out.add_segment(vertices.back(), vertices.front());
  return out;
}

SphereContinuum SphereContinuum::point(PlanePoint z) {
  SphereContinuum out;
  out.add_point(z);
  return out;
}

SphereContinuum SphereContinuum::line_through_origin(PlanePoint unit_dir) {
  SphereContinuum out;
  out.add_ray({0.0, 0.0}, unit_dir);
  out.add_ray({0.0, 0.0}, -unit_dir);
  return out;
}

SphereContinuum SphereContinuum::ray(PlanePoint origin, PlanePoint unit_dir) {
  SphereContinuum out;
  out.add_ray(origin, unit_dir);
  return out;
}

void SphereContinuum::add_segment(PlanePoint a, PlanePoint b) {
  pieces_.push_back({a, b, false});
}

void SphereContinuum::add_ray(PlanePoint origin, PlanePoint unit_dir) {
  pieces_.push_back({origin, unit_dir / std::abs(unit_dir), true});
  has_inf_ = true;  // rays are closed only together with the pole
}

void SphereContinuum::add_point(PlanePoint z) { pieces_.push_back({z, z, false}); }

void SphereContinuum::merge(const SphereContinuum& other) {
  pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
  has_inf_ = has_inf_ || other.has_inf_;
}

SphereContinuum SphereContinuum::scaled(double s) const {
  SphereContinuum out;
  out.has_inf_ = has_inf_;
  out.pieces_.reserve(pieces_.size());
  for (const auto& p : pieces_)
    out.pieces_.push_back({p.a * s, p.ray ? p.b : p.b * s, p.ray});
  return out;
}

SpherePoint ns_map(const SpherePoint& z, int direction) {
  if (z.infinite) return z;
  return SpherePoint::finite(direction > 0 ? z.z * 0.5 : z.z * 2.0);
}

SphereContinuum ns_map(const SphereContinuum& c, int direction) {
  return c.scaled(direction > 0 ? 0.5 : 2.0);
}

namespace {

// Exact-containment tests used to skip zero-contribution pieces in directed
// sups (shared bitwise pieces, collinear sub-segments of longer pieces).
bool collinear_within(PlanePoint p, PlanePoint q, PlanePoint d) {
  double scale = std::abs(d) * (std::abs(p - q) + std::abs(d)) + 1e-300;
  return std::fabs(cross2(p - q, d)) <= 1e-14 * scale;
}

bool piece_contained(const SpherePiece& x, const SpherePiece& y) {
  if (x == y) return true;
  if (!y.ray) {
    if (x.ray) return false;
    PlanePoint d = y.b - y.a;
    double dn2 = std::norm(d);
    if (dn2 == 0.0) return !x.ray && x.a == x.b && x.a == y.a;
    if (!collinear_within(x.a, y.a, d) || !collinear_within(x.b, y.a, d)) return false;
    double ta = dot2(x.a - y.a, d) / dn2;
    double tb = dot2(x.b - y.a, d) / dn2;
    return ta >= -1e-12 && ta <= 1.0 + 1e-12 && tb >= -1e-12 && tb <= 1.0 + 1e-12;
  }
  // y is a ray from y.a along unit y.b
  if (x.ray) {
    if (std::fabs(cross2(x.b, y.b)) > 1e-14 || dot2(x.b, y.b) < 0.0) return false;
    if (!collinear_within(x.a, y.a, y.b)) return false;
    return dot2(x.a - y.a, y.b) >= -1e-12;
  }
  if (!collinear_within(x.a, y.a, y.b) || !collinear_within(x.b, y.a, y.b)) return false;
  return dot2(x.a - y.a, y.b) >= -1e-12 && dot2(x.b - y.a, y.b) >= -1e-12;
}

bool contained_in_continuum(const SpherePiece& x, const SphereContinuum& c) {
  for (const auto& y : c.pieces())
    if (piece_contained(x, y)) return true;
  return false;
}

struct RefineInterval {
  const ArcGeom* geom;
  double t0, t1, d0, d1;
  double upper() const {
    return 0.5 * (d0 + d1 + geom->rho * (t1 - t0));
  }
};

}  // namespace

SupBracket directed_hausdorff_sup(const SphereContinuum& a, const SphereContinuum& b,
                                  double eta) {
  double lower = 0.0;
  auto eval = [&](const Vec3& p) {
    double best = b.has_infinity() ? dist3(p, kNorth) : 1e300;
    for (const auto& piece : b.pieces())
      best = std::min(best, point_to_piece(p, piece));
    return best;
  };

  if (a.has_infinity() && !b.has_infinity()) lower = std::max(lower, eval(kNorth));

  std::vector<ArcGeom> geoms;
  geoms.reserve(a.pieces().size());
  std::vector<RefineInterval> stack;
  for (const auto& piece : a.pieces()) {
    if (contained_in_continuum(piece, b)) continue;
    geoms.push_back(prepare_arc(piece));
  }
  for (const auto& g : geoms) {
    if (g.point) {
      lower = std::max(lower, eval(g.a3));
      lower = std::max(lower, eval(g.b3));
      continue;
    }
    const int init = 8;
    double prev_t = g.lo;
    double prev_d = eval(arc_point(g, g.lo));
    lower = std::max(lower, prev_d);
    for (int i = 1; i <= init; ++i) {
      double t = g.lo + (g.hi - g.lo) * i / init;
      double d = eval(arc_point(g, t));
      lower = std::max(lower, d);
      stack.push_back({&g, prev_t, t, prev_d, d});
      prev_t = t;
      prev_d = d;
    }
  }

  double pruned_upper = lower;
  std::size_t evals = 0;
  const std::size_t eval_cap = 200000;
  while (!stack.empty()) {
    RefineInterval iv = stack.back();
    stack.pop_back();
    double up = iv.upper();
    if (up <= lower + eta || evals >= eval_cap) {
      pruned_upper = std::max(pruned_upper, up);
      continue;
    }
    double tm = 0.5 * (iv.t0 + iv.t1);
    double dm = eval(arc_point(*iv.geom, tm));
    ++evals;
    lower = std::max(lower, dm);
    stack.push_back({iv.geom, iv.t0, tm, iv.d0, dm});
    stack.push_back({iv.geom, tm, iv.t1, dm, iv.d1});
  }
  return {lower, std::max(lower, pruned_upper)};
}

SphereHausdorff hausdorff_sphere(const SphereContinuum& a, const SphereContinuum& b,
                                 double eta) {
  SupBracket ab = directed_hausdorff_sup(a, b, eta);
  SupBracket ba = directed_hausdorff_sup(b, a, eta);
  double lo = std::max(ab.lower, ba.lower);
  double hi = std::max(ab.upper, ba.upper);
  return {0.5 * (lo + hi), 0.5 * (hi - lo), hi};
}

SphereContinuum build_fixed_spine(PlanePoint x) {
  double n = std::abs(x);
  if (!(n > 0.0)) throw std::invalid_argument("spine base must avoid the fixed points");
  return SphereContinuum::ray({0.0, 0.0}, x / n);
}

PeriodicContinuumReport build_periodic_continuum(int N, PlanePoint x,
                                                 const std::vector<PlanePoint>& detour,
                                                 int window) {
  if (N < 1 || window < 1) throw std::invalid_argument("N, window >= 1 required");
  if (detour.size() < 2) throw std::invalid_argument("detour needs >= 2 vertices");
  double scale_end = std::ldexp(1.0, -N);
  if (std::abs(detour.front() - x) > 1e-12 * (1.0 + std::abs(x)))
    throw std::invalid_argument("detour must start at x");
  if (std::abs(detour.back() - x * scale_end) > 1e-12 * (1.0 + std::abs(x)))
    throw std::invalid_argument("detour must end at f^N(x)");
  // the detour must avoid the intermediate orbit points
  for (int j = -(N - 1); j <= N - 1; ++j) {
    if (j == 0) continue;
    Vec3 fj = embed_plane(x * std::ldexp(1.0, -j));
    for (std::size_t i = 0; i + 1 < detour.size(); ++i)
      if (point_to_piece(fj, {detour[i], detour[i + 1], false}) <= 1e-9)
        throw std::invalid_argument("detour intersects a forbidden orbit point");
  }

  PeriodicContinuumReport rep;
  // a radial detour telescopes onto the invariant ray, which has an exact
  // closed-form representation
  bool radial = true;
  for (const auto& v : detour)
    if (std::fabs(cross2(v, x)) > 1e-15 * std::abs(x) * std::abs(v) ||
        dot2(v, x) <= 0.0)
      radial = false;
  if (radial) {
    rep.continuum = build_fixed_spine(x);
    rep.continuum.add_point({0.0, 0.0});
    rep.defect = 0.0;
    rep.period_check = 0.0;
    return rep;
  }
  SphereContinuum base = SphereContinuum::polyline(detour);
  for (int j = -window; j <= window; ++j)
    rep.continuum.merge(base.scaled(std::ldexp(1.0, -j * N)));
  rep.continuum.add_point({0.0, 0.0});
  rep.continuum.set_infinity(true);

  const double eta = 1e-9;
  rep.defect = hausdorff_sphere(rep.continuum.scaled(std::ldexp(1.0, -N)),
                                rep.continuum, eta).upper;
  rep.period_check = hausdorff_sphere(rep.continuum.scaled(std::ldexp(1.0, -2 * N)),
                                      rep.continuum, eta).upper;
  return rep;
}

namespace {

bool plane_segments_intersect(PlanePoint a, PlanePoint b, PlanePoint c, PlanePoint d) {
  auto orient = [](PlanePoint p, PlanePoint q, PlanePoint r) {
    double v = cross2(q - p, r - p);
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on = [&](PlanePoint p, PlanePoint q, PlanePoint r) {
    return orient(p, q, r) == 0 && dot2(r - p, r - q) <= 0.0;
  };
  return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

}  // namespace

HomoclinicSphereReport build_homoclinic_witness(PlanePoint x,
                                                const std::vector<PlanePoint>& beta,
                                                int window) {
  if (beta.size() < 2 || window < 1)
    throw std::invalid_argument("beta needs >= 2 vertices, window >= 1");
  HomoclinicSphereReport rep;
  rep.spine = build_fixed_spine(x);
  if (point_to_continuum(SpherePoint::finite(beta.front()), rep.spine) > 1e-12)
    throw std::invalid_argument("beta must attach to the spine at its first vertex");
  // interior of beta must leave the spine
  for (std::size_t i = 0; i + 1 < beta.size(); ++i)
    for (int s = 1; s <= 16; ++s) {
      PlanePoint p = beta[i] + (beta[i + 1] - beta[i]) * (s / 16.0);
      if (i == 0 && s == 0) continue;
      if (std::abs(p - beta.front()) < 1e-12) continue;
      if (point_to_continuum(SpherePoint::finite(p), rep.spine) <= 1e-9)
        throw std::invalid_argument("beta re-enters the spine off the attachment");
    }
  // iterates of beta are pairwise disjoint inside the window
  for (int n = -window; n <= window; ++n)
    for (int m = n + 1; m <= window; ++m) {
      double sn = std::ldexp(1.0, -n), sm = std::ldexp(1.0, -m);
      for (std::size_t i = 0; i + 1 < beta.size(); ++i)
        for (std::size_t j = 0; j + 1 < beta.size(); ++j)
          if (plane_segments_intersect(beta[i] * sn, beta[i + 1] * sn,
                                       beta[j] * sm, beta[j + 1] * sm))
            throw std::invalid_argument("beta iterates intersect inside the window");
    }

  SphereContinuum beta_c = SphereContinuum::polyline(beta);
  rep.witness = rep.spine;
  rep.witness.merge(beta_c);

  const double eta_table = 1e-6;
  const double eta_floor = 1e-3;
  auto with_spine = [&](const SphereContinuum& extra) {
    SphereContinuum k = rep.spine;
    k.merge(extra);
    return k;
  };
  double floor = 1e300;
  for (int n = -window; n <= window; ++n) {
    SphereContinuum stepped = with_spine(beta_c.scaled(std::ldexp(1.0, -n)));
    rep.approach_to_spine.push_back(
        hausdorff_sphere(stepped, rep.spine, eta_table).upper);
    if (n >= 1)
      floor = std::min(floor,
                       hausdorff_sphere(stepped, rep.witness, eta_floor).value -
                           hausdorff_sphere(stepped, rep.witness, eta_floor).error);
  }
  rep.eta_floor = floor;
  for (int n = 1; n <= window; ++n) {
    // K_n = K u f^{-n}(beta)
    SphereContinuum kn = rep.witness;
    kn.merge(beta_c.scaled(std::ldexp(1.0, n)));
    rep.approximant_gap.push_back(hausdorff_sphere(kn, rep.witness, eta_table).upper);
    // step^n(K_n) = K u f^n(beta)
    SphereContinuum img = rep.witness;
    img.merge(beta_c.scaled(std::ldexp(1.0, -n)));
    rep.approximant_return.push_back(
        hausdorff_sphere(img, rep.witness, eta_table).upper);
  }
  return rep;
}

namespace {

// Block decomposition of the windowed orbit of gamma u beta in coordinates
// w = z / x: gamma_w = [1/2, 1] on the real axis, beta_w an attached arc.
struct ConjugacyChart {
  PlanePoint x;
  std::vector<PlanePoint> beta_w;     // beta vertices divided by x
  std::vector<double> beta_cumlen;    // cumulative plane arc length
  double beta_total = 0.0;

  // locate a w-plane point on gamma_w u beta_w; returns the dendrite image
  // under the block chart G
  std::optional<DendritePoint> locate(PlanePoint w, double tol) const {
    if (std::fabs(w.imag()) <= tol && w.real() >= 0.5 - tol && w.real() <= 1.0 + tol) {
      double s = std::min(1.0, std::max(0.5, w.real()));
      return DendritePoint::spine(s - 1.0);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < beta_w.size(); ++i) {
      PlanePoint a = beta_w[i], b = beta_w[i + 1];
      PlanePoint d = b - a;
      double len = std::abs(d);
      double t = len > 0.0 ? std::clamp(dot2(w - a, d) / (len * len), 0.0, 1.0) : 0.0;
      if (std::abs(w - (a + d * t)) <= tol) {
        double frac = std::min(1.0, (acc + t * len) / beta_total);
        if (frac <= 0.0) return DendritePoint::spine(0.0);
        return DendritePoint::on_leg(0, frac);
      }
      acc += len;
    }
    return std::nullopt;
  }
};

DendritePoint apply_F(DendritePoint p, int n) {
  for (int i = 0; i < n; ++i) p = F_eval(p);
  for (int i = 0; i > n; --i) p = F_inverse(p);
  return p;
}

}  // namespace

ConjugacyReport special_dendrite_conjugacy(PlanePoint x,
                                           const std::vector<PlanePoint>& beta,
                                           int window, int mesh_per_block) {
  if (std::abs(x) == 0.0) throw std::invalid_argument("x must avoid the fixed points");
  if (beta.size() < 2 || window < 2 || mesh_per_block < 2)
    throw std::invalid_argument("need beta, window >= 2, mesh >= 2");

  ConjugacyChart chart;
  chart.x = x;
  for (const auto& v : beta) chart.beta_w.push_back(v / x);
  if (std::abs(chart.beta_w.front() - PlanePoint{1.0, 0.0}) > 1e-12)
    throw std::invalid_argument("beta must attach at x");
  for (std::size_t i = 0; i + 1 < chart.beta_w.size(); ++i) {
    chart.beta_total += std::abs(chart.beta_w[i + 1] - chart.beta_w[i]);
    chart.beta_cumlen.push_back(chart.beta_total);
  }
  if (!(chart.beta_total > 0.0)) throw std::invalid_argument("beta degenerate");

  auto H = [&](PlanePoint v) {
    PlanePoint w = v / x;
    double mag = std::abs(w);
    if (!(mag > 0.0)) throw std::runtime_error("H undefined at the sink");
    long guess = std::lround(-std::log2(mag));
    for (long n = guess - 2; n <= guess + 2; ++n) {
      PlanePoint zeta = w * std::ldexp(1.0, static_cast<int>(n));
      if (auto p = chart.locate(zeta, 1e-9))
        return apply_F(*p, static_cast<int>(n));
    }
    throw std::runtime_error("mesh point escapes the block decomposition");
  };

  ConjugacyReport rep;
  // deterministic mesh across the blocks
  std::vector<PlanePoint> mesh;
  for (int n = -window; n <= window; ++n) {
    double s = std::ldexp(1.0, -n);
    for (int j = 1; j <= mesh_per_block; ++j) {
      double t = 0.5 + 0.5 * j / mesh_per_block;  // gamma sample in (1/2, 1]
      mesh.push_back(x * (t * s));
    }
    for (int j = 1; j <= mesh_per_block; ++j) {
      double frac = static_cast<double>(j) / mesh_per_block;
      // beta sample at arclength fraction frac
      double target = frac * chart.beta_total;
      double acc = 0.0;
      PlanePoint zeta = chart.beta_w.back();
      for (std::size_t i = 0; i + 1 < chart.beta_w.size(); ++i) {
        double len = std::abs(chart.beta_w[i + 1] - chart.beta_w[i]);
        if (acc + len >= target) {
          double t = len > 0.0 ? (target - acc) / len : 0.0;
          zeta = chart.beta_w[i] + (chart.beta_w[i + 1] - chart.beta_w[i]) * t;
          break;
        }
        acc += len;
      }
      mesh.push_back(x * (zeta * s));
    }
  }
  rep.mesh_points = static_cast<int>(mesh.size());

  for (const auto& v : mesh) {
    DendritePoint lhs = H(v * 0.5);      // H(f(v))
    DendritePoint rhs = F_eval(H(v));    // F(H(v))
    rep.max_residual = std::max(rep.max_residual, dendrite_distance(lhs, rhs));
  }

  // continuity probes: sink -> (+1, 0), source -> (-1, 0), and the block
  // joints f^n(x) -> a_n for n in {-1, 0, 1}
  rep.radii = {0.1, 0.05, 0.01};
  DendritePoint sink_img = DendritePoint::spine(1.0);
  DendritePoint source_img = DendritePoint::spine(-1.0);
  struct Joint {
    PlanePoint at;
    DendritePoint image;
  };
  std::vector<Joint> joints{{x * 2.0, DendritePoint::spine(dendrite_anchor(-1))},
                            {x, DendritePoint::spine(dendrite_anchor(0))},
                            {x * 0.5, DendritePoint::spine(dendrite_anchor(1))}};
  for (double r : rep.radii) {
    double s_mod = 0.0, q_mod = 0.0, j_mod = 0.0;
    for (const auto& v : mesh) {
      SpherePoint sv = SpherePoint::finite(v);
      if (chordal(sv, SpherePoint::finite({0.0, 0.0})) <= r)
        s_mod = std::max(s_mod, dendrite_distance(H(v), sink_img));
      if (chordal(sv, SpherePoint::infinity()) <= r)
        q_mod = std::max(q_mod, dendrite_distance(H(v), source_img));
      for (const auto& joint : joints)
        if (chordal(sv, SpherePoint::finite(joint.at)) <= r)
          j_mod = std::max(j_mod, dendrite_distance(H(v), joint.image));
    }
    rep.sink_modulus.push_back(s_mod);
    rep.source_modulus.push_back(q_mod);
    rep.joint_modulus.push_back(j_mod);
  }
  return rep;
}

namespace {

struct SphereCandidate {
  SphereContinuum c;
  bool has_p = false;
  bool has_q = false;
  std::string family;
  double p1 = 0.0, p2 = 0.0;
};

std::vector<SphereCandidate> build_family(std::size_t m) {
  std::vector<SphereCandidate> out;
  const double pi = std::acos(-1.0);
  auto dir = [&](double t) { return PlanePoint{std::cos(t), std::sin(t)}; };

  // great circles through both fixed points
  std::size_t n_lines = 200 * m;
  for (std::size_t j = 0; j < n_lines; ++j) {
    double t = pi * static_cast<double>(j) / static_cast<double>(n_lines);
    out.push_back({SphereContinuum::line_through_origin(dir(t)), true, true, "line", t, 0});
  }
  // circles through the attractor (64-gon polylines)
  for (std::size_t ia = 0; ia < 4 * m; ++ia)
    for (std::size_t ir = 0; ir < 5 * m; ++ir) {
      double psi = 2.0 * pi * static_cast<double>(ia) / (4.0 * static_cast<double>(m));
      double radius = 0.02 * std::pow(50.0 / 0.02, static_cast<double>(ir) /
                                                        (5.0 * static_cast<double>(m) - 1.0));
      PlanePoint c = dir(psi) * radius;
      std::vector<PlanePoint> verts;
      for (int k = 0; k < 64; ++k) {
        double t = 2.0 * pi * k / 64.0;
        verts.push_back(c - c * PlanePoint{std::cos(t), std::sin(t)});
      }
      out.push_back({SphereContinuum::polyline(verts, true), true, false, "circle0",
                     psi, radius});
    }
  // radial segments, some touching the attractor
  for (std::size_t ia = 0; ia < 4 * m; ++ia)
    for (std::size_t ir = 0; ir < 5 * m; ++ir) {
      double phi = 2.0 * pi * static_cast<double>(ia) / (4.0 * static_cast<double>(m));
      double r2 = 0.05 * std::pow(400.0, static_cast<double>(ir) /
                                             (5.0 * static_cast<double>(m) - 1.0));
      double r1 = (ir % 3 == 0) ? 0.0 : r2 * 0.2;
      out.push_back({SphereContinuum::polyline({dir(phi) * r1, dir(phi) * r2}),
                     r1 == 0.0, false, "radial", phi, r2});
    }
  // rays to the repeller
  for (std::size_t ia = 0; ia < 4 * m; ++ia)
    for (std::size_t ir = 0; ir < 5 * m; ++ir) {
      double phi = 2.0 * pi * static_cast<double>(ia) / (4.0 * static_cast<double>(m));
      double r0 = 0.05 * std::pow(400.0, static_cast<double>(ir) /
                                             (5.0 * static_cast<double>(m) - 1.0));
      out.push_back({SphereContinuum::ray(dir(phi) * r0, dir(phi)), false, true, "ray",
                     phi, r0});
    }
  // near-real notched polylines dodging both fixed points
  for (std::size_t ig = 0; ig < 5 * m; ++ig)
    for (std::size_t ib = 0; ib < 2 * m; ++ib)
      for (int updown = 0; updown < 2; ++updown) {
        double g = 0.01 * std::pow(20.0, static_cast<double>(ig) /
                                             (5.0 * static_cast<double>(m) - 1.0));
        double b = g * (0.25 + 1.75 * static_cast<double>(ib) /
                                   std::max<double>(1.0, 2.0 * static_cast<double>(m) - 1.0));
        double sign = updown == 0 ? 1.0 : -1.0;
        const double L = 300.0;
        out.push_back({SphereContinuum::polyline({{-L, 0.0}, {-g, 0.0},
                                                  {0.0, sign * b},
                                                  {g, 0.0}, {L, 0.0}}),
                       false, false, "notch", g, sign * b});
      }
  // generic chords away from the fixed points
  for (std::size_t i1 = 0; i1 < 4 * m; ++i1)
    for (std::size_t i2 = 0; i2 < 4 * m; ++i2) {
      double phi1 = 2.0 * pi * static_cast<double>(i1) / (4.0 * static_cast<double>(m));
      double phi2 = 0.4 + 2.0 * pi * static_cast<double>(i2) / (4.0 * static_cast<double>(m));
      out.push_back({SphereContinuum::polyline({dir(phi1) * 0.7, dir(phi2) * 1.9}),
                     false, false, "chord", phi1, phi2});
    }
  return out;
}

}  // namespace

SphereFalsification sphere_nonshadowing_certificate(double epsilon, double delta,
                                                    int window, double wedge_angle,
                                                    std::size_t family_scale,
                                                    bool keep_failures,
                                                    std::uint64_t audit_seed) {
  if (!(epsilon > 0.0 && delta > 0.0) || window < 2)
    throw std::invalid_argument("need epsilon, delta > 0 and window >= 2");
  // the wedge boundary lines must leave the epsilon-collar of the real circle
  if (!(2.0 * std::sin(0.5 * wedge_angle) > epsilon))
    throw std::invalid_argument("wedge angle too small for the epsilon collar");

  SphereFalsification rep;
  rep.epsilon = epsilon;
  rep.delta = delta;
  rep.wedge_angle = wedge_angle;
  rep.keep_failures = keep_failures;

  // splice pseudo-orbit along the real great circle
  const double R = std::sqrt(16.0 / (delta * delta) - 1.0);
  const double rho = 0.5 * delta / std::sqrt(4.0 - 0.25 * delta * delta);
  auto state = [&](int i) {
    SphereContinuum s;
    if (i == 0) return SphereContinuum::line_through_origin({1.0, 0.0});
    if (i > 0) {
      double Ri = R * std::ldexp(1.0, -(i - 1));
      s.add_segment({-Ri, 0.0}, {Ri, 0.0});
      return s;
    }
    double ri = rho * std::ldexp(1.0, -i - 1);
    s.add_ray({ri, 0.0}, {1.0, 0.0});
    s.add_ray({-ri, 0.0}, {-1.0, 0.0});
    return s;
  };
  // gap audit of the splice construction
  for (int i = -window; i < window; ++i) {
    double gap = hausdorff_sphere(ns_map(state(i), +1), state(i + 1), 1e-4).upper;
    rep.pseudo_orbit_max_gap = std::max(rep.pseudo_orbit_max_gap, gap);
  }
  if (rep.pseudo_orbit_max_gap > delta)
    throw std::runtime_error("internal: splice pseudo-orbit exceeds delta");

  auto family = build_family(family_scale);
  rep.candidates_tested = family.size();

  // closed-form witness distances
  auto d_p_to_backward = [&](int i) {
    double ri = rho * std::ldexp(1.0, i - 1);
    return std::min(2.0 * ri / std::sqrt(1.0 + ri * ri), 2.0);
  };
  auto d_q_to_forward = [&](int i) {
    double Ri = R * std::ldexp(1.0, -(i - 1));
    return 2.0 / std::sqrt(1.0 + Ri * Ri);
  };

  const double pi = std::acos(-1.0);
  constexpr double kMarginFloor = 1e-9;

  std::set<std::uint64_t> audit_ids;
  {
    Rng rng(audit_seed);
    while (audit_ids.size() < std::min<std::uint64_t>(100, family.size()))
      audit_ids.insert(rng.below(family.size()));
  }
  std::mutex audit_mu;
  std::vector<std::pair<std::uint64_t, SphereCandidateFailure>> audits;

  const std::size_t chunk = 64;
  std::size_t n_chunks = (family.size() + chunk - 1) / chunk;
  std::vector<double> chunk_margin(n_chunks, 1e300);
  std::vector<std::uint64_t> chunk_surv(n_chunks, 0);
  std::vector<std::vector<SphereCandidateFailure>> chunk_failures(n_chunks);

  parallel_chunks(family.size(), chunk, [&](std::size_t ci, std::size_t beg, std::size_t end) {
    for (std::size_t id = beg; id < end; ++id) {
      const SphereCandidate& cand = family[id];
      SphereCandidateFailure f{cand.family, cand.p1, cand.p2, 0, -1e300, 0};
      bool failed = false;

      // index 0: certified lower bound of d_H(A, S_1)
      SphereHausdorff h0 = hausdorff_sphere(cand.c, state(0), 2e-3);
      double low0 = h0.value - h0.error;
      if (low0 > epsilon + kMarginFloor) {
        f.index = 0;
        f.margin = low0 - epsilon;
        f.route = 0;
        failed = true;
      }
      if (!failed && (cand.has_p || cand.has_q)) {
        // a retained fixed point is carried to every iterate
        for (int i = 1; i <= window && !failed; ++i) {
          if (cand.has_q && d_q_to_forward(i) > epsilon + kMarginFloor) {
            f.index = i;
            f.margin = d_q_to_forward(i) - epsilon;
            f.route = 1;
            failed = true;
          } else if (cand.has_p && d_p_to_backward(i) > epsilon + kMarginFloor) {
            f.index = -i;
            f.margin = d_p_to_backward(i) - epsilon;
            f.route = 1;
            failed = true;
          }
        }
      }
      if (!failed && !cand.has_p && !cand.has_q) {
        // wedge-escape witness: the best-clearance sample of A in the
        // complement region keeps its argument under backward iteration
        PlanePoint best_c{0.0, 0.0};
        double best_clearance = -1e300;
        for (const auto& piece : cand.c.pieces()) {
          for (int s = 0; s <= 4; ++s) {
            PlanePoint z = piece.ray ? piece.a + piece.b * (0.5 * (1.0 + std::abs(piece.a)) * (s + 1.0))
                                     : piece.a + (piece.b - piece.a) * (s / 4.0);
            if (std::abs(z) == 0.0) continue;
            double ang = std::fabs(std::atan2(z.imag(), z.real()));
            double clearance = std::min(ang, pi - ang) - wedge_angle;
            if (clearance > best_clearance) {
              best_clearance = clearance;
              best_c = z;
            }
          }
        }
        if (best_clearance > 0.0) {
          for (int i = 1; i <= window && !failed; ++i) {
            Vec3 w = embed_plane(best_c * std::ldexp(1.0, i));
            SphereContinuum back = state(-i);
            double d = 1e300;
            for (const auto& piece : back.pieces())
              d = std::min(d, point_to_piece(w, piece));
            d = std::min(d, dist3(w, kNorth));
            if (d > epsilon + kMarginFloor) {
              f.index = -i;
              f.margin = d - epsilon;
              f.route = 2;
              failed = true;
            }
          }
        }
      }
      if (!failed) {
        // full scan fallback before declaring a survivor
        double best = -1e300;
        for (int i = -window; i <= window && !failed; ++i) {
          SphereHausdorff h = hausdorff_sphere(cand.c.scaled(std::ldexp(1.0, -i)),
                                               state(i), 2e-3);
          double low = h.value - h.error;
          best = std::max(best, low - epsilon);
          if (low > epsilon + kMarginFloor) {
            f.index = i;
            f.margin = low - epsilon;
            f.route = 0;
            failed = true;
          }
        }
        if (!failed) f.margin = best;
      }

      if (!failed) ++chunk_surv[ci];
      chunk_margin[ci] = std::min(chunk_margin[ci], f.margin);
      if (keep_failures) chunk_failures[ci].push_back(f);
      if (audit_ids.count(id)) {
        std::lock_guard<std::mutex> lock(audit_mu);
        audits.emplace_back(id, f);
      }
    }
  });

  rep.worst_margin = 1e300;
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {
    rep.survivors += chunk_surv[ci];
    rep.worst_margin = std::min(rep.worst_margin, chunk_margin[ci]);
    if (keep_failures)
      rep.failures.insert(rep.failures.end(), chunk_failures[ci].begin(),
                          chunk_failures[ci].end());
  }
  rep.verdict = rep.survivors == 0 && rep.worst_margin > 0.0
                    ? SphereVerdict::kFalsified
                    : SphereVerdict::kInconclusive;

  // audit: re-verify recorded failures at finer resolution
  std::sort(audits.begin(), audits.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  rep.audit_samples = audits.size();
  for (const auto& [id, f] : audits) {
    if (!(f.margin > 0.0)) continue;
    const SphereCandidate& cand = family[id];
    SphereHausdorff h = hausdorff_sphere(cand.c.scaled(std::ldexp(1.0, -f.index)),
                                         state(f.index), 1e-4);
    if (!(h.value - h.error > epsilon)) rep.audit_ok = false;
  }
  return rep;
}

}  // namespace hyperlab
