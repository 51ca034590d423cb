#include "hyperlab/dendrite.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperlab {

double dendrite_anchor(long n) {
  if (n == 0) return 0.0;
  double m = static_cast<double>(std::labs(n));
  double a = 1.0 - 1.0 / (m + 1.0);
  return n > 0 ? a : -a;
}

double dendrite_leg_length(long n) {
  return 1.0 / (static_cast<double>(std::labs(n)) + 1.0);
}

DendritePoint DendritePoint::spine(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("spine coordinate outside [-1,1]");
  return {Kind::kSpine, x, 0, 0.0};
}

DendritePoint DendritePoint::on_leg(long n, double h) {
  double len = dendrite_leg_length(n);
  if (!(h >= 0.0) || h > len * (1.0 + 1e-12))
    throw std::invalid_argument("leg height outside [0, leg length]");
  if (h > len) h = len;  // rescaling chains can overshoot by an ulp
  if (h == 0.0) return spine(dendrite_anchor(n));
  return {Kind::kLeg, dendrite_anchor(n), n, h};
}

std::pair<double, double> DendritePoint::ambient() const {
  return {x, kind == Kind::kLeg ? h : 0.0};
}

double dendrite_distance(const DendritePoint& a, const DendritePoint& b) {
  auto [ax, ay] = a.ambient();
  auto [bx, by] = b.ambient();
  return std::hypot(ax - bx, ay - by);
}

namespace {

// Block index n with a_n <= x < a_{n+1} (x in (-1, 1)).
long spine_block(double x) {
  if (x >= 0.0) {
    // a_n <= x < a_{n+1}  <=>  n+1 <= 1/(1-x) < n+2
    double inv = 1.0 / (1.0 - x);
    long n = static_cast<long>(std::floor(inv)) - 1;
    while (dendrite_anchor(n + 1) <= x) ++n;
    while (dendrite_anchor(n) > x) --n;
    return n;
  }
  double inv = 1.0 / (1.0 + x);
  long n = -static_cast<long>(std::floor(inv));
  while (dendrite_anchor(n + 1) <= x) ++n;
  while (dendrite_anchor(n) > x) --n;
  return n;
}

double spine_forward(double x) {
  if (x == 1.0 || x == -1.0) return x;
  long n = spine_block(x);
  double lo = dendrite_anchor(n), hi = dendrite_anchor(n + 1);
  double t = (x - lo) / (hi - lo);
  return dendrite_anchor(n + 1) + t * (dendrite_anchor(n + 2) - dendrite_anchor(n + 1));
}

double spine_backward(double x) {
  if (x == 1.0 || x == -1.0) return x;
  long n = spine_block(x);
  double lo = dendrite_anchor(n), hi = dendrite_anchor(n + 1);
  double t = (x - lo) / (hi - lo);
  return dendrite_anchor(n - 1) + t * (dendrite_anchor(n) - dendrite_anchor(n - 1));
}

double leg_rescale(long from, long to, double h) {
  return h * dendrite_leg_length(to) / dendrite_leg_length(from);
}

}  // namespace

DendritePoint F_eval(const DendritePoint& p) {
  if (p.kind == DendritePoint::Kind::kSpine)
    return DendritePoint::spine(spine_forward(p.x));
  return DendritePoint::on_leg(p.leg + 1, leg_rescale(p.leg, p.leg + 1, p.h));
}

DendritePoint F_inverse(const DendritePoint& p) {
  if (p.kind == DendritePoint::Kind::kSpine)
    return DendritePoint::spine(spine_backward(p.x));
  return DendritePoint::on_leg(p.leg - 1, leg_rescale(p.leg, p.leg - 1, p.h));
}

Subtree::Subtree(double u, double v, std::map<long, double> leg_heights)
    : u_(u), v_(v), legs_(std::move(leg_heights)) {
  if (!(u >= -1.0 && v <= 1.0 && u <= v))
    throw std::invalid_argument("spine interval invalid");
  for (const auto& [n, h] : legs_) {
    if (!(h > 0.0) || h > dendrite_leg_length(n) + 1e-15)
      throw std::invalid_argument("leg stub height outside (0, leg length]");
    double a = dendrite_anchor(n);
    if (a < u_ - 1e-15 || a > v_ + 1e-15)
      throw std::invalid_argument("leg stub detached from the spine interval");
  }
}

Subtree Subtree::image(int direction) const {
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("direction must be +-1");
  double nu = direction == 1 ? spine_forward(u_) : spine_backward(u_);
  double nv = direction == 1 ? spine_forward(v_) : spine_backward(v_);
  std::map<long, double> legs;
  for (const auto& [n, h] : legs_)
    legs[n + direction] = leg_rescale(n, n + direction, h);
  return Subtree(nu, nv, std::move(legs));
}

Subtree subtree_image(const Subtree& s, int direction) { return s.image(direction); }

namespace {

double interval_distance(double x, double lo, double hi) {
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

double point_to_subtree(double px, double py, const Subtree& s) {
  // spine segment
  double best = std::hypot(interval_distance(px, s.spine_lo(), s.spine_hi()), py);
  // vertical stubs
  for (const auto& [n, g] : s.legs()) {
    double dx = px - dendrite_anchor(n);
    double dy = py > g ? py - g : 0.0;
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

double directed_subtree(const Subtree& from, const Subtree& to) {
  // leg suprema at the tips, spine suprema at the interval endpoints
  double worst = std::max(point_to_subtree(from.spine_lo(), 0.0, to),
                          point_to_subtree(from.spine_hi(), 0.0, to));
  for (const auto& [n, h] : from.legs())
    worst = std::max(worst, point_to_subtree(dendrite_anchor(n), h, to));
  return worst;
}

}  // namespace

double distance_to_subtree(const DendritePoint& p, const Subtree& s) {
  auto [px, py] = p.ambient();
  return point_to_subtree(px, py, s);
}

double hausdorff_subtrees(const Subtree& s1, const Subtree& s2) {
  return std::max(directed_subtree(s1, s2), directed_subtree(s2, s1));
}

Subtree build_C_sigma(int k, int n, const std::vector<int>& sigma) {
  if (k < 1 || n < 1) throw std::invalid_argument("k, n >= 1 required");
  if (sigma.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("sigma length must equal n");
  for (int s : sigma)
    if (s < 1 || s > k) throw std::invalid_argument("sigma entries must lie in 1..k");
  std::map<long, double> legs;
  for (int j = 0; j < n; ++j)
    legs[j] = static_cast<double>(sigma[static_cast<std::size_t>(j)]) /
              (static_cast<double>(k) * (j + 1.0));
  return Subtree(dendrite_anchor(0), dendrite_anchor(n - 1), std::move(legs));
}

CSigmaCertificate verify_C_sigma_separation(int k, int n, double delta) {
  CSigmaCertificate cert;
  cert.k = k;
  cert.n = n;
  cert.delta = delta > 0.0 ? delta : 0.9 * std::min(1.0 / k, 0.5);

  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<std::size_t>(k);
  if (count > 100)
    throw std::invalid_argument("k^n > 100: family too large to materialize");

  // all addresses, with their backward iterates F^{-j}(C_sigma), j < n
  std::vector<std::vector<Subtree>> orbits;
  orbits.reserve(count);
  for (std::size_t id = 0; id < count; ++id) {
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::size_t v = id;
    for (int j = 0; j < n; ++j) {
      sigma[static_cast<std::size_t>(j)] = static_cast<int>(v % k) + 1;
      v /= static_cast<std::size_t>(k);
    }
    std::vector<Subtree> row{build_C_sigma(k, n, sigma)};
    for (int j = 1; j < n; ++j) row.push_back(row.back().image(-1));
    orbits.push_back(std::move(row));
  }

  cert.count = count;
  cert.delta_star = 1e300;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      double dn = 0.0;
      for (int t = 0; t < n; ++t)
        dn = std::max(dn, hausdorff_subtrees(orbits[i][static_cast<std::size_t>(t)],
                                             orbits[j][static_cast<std::size_t>(t)]));
      cert.delta_star = std::min(cert.delta_star, dn);
      ++cert.pairs;
    }
  cert.all_separated = cert.delta_star > cert.delta;
  cert.log_count_rate = std::log(static_cast<double>(count)) / n;
  return cert;
}

FullConeCode fullcone_step(const FullConeCode& code, int direction) {
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("direction must be +-1");
  FullConeCode out{code.r, {}};
  for (const auto& [i, n] : code.selected) out.selected.insert({i, n + direction});
  return out;
}

BitTupleSeq fullcone_phi(const FullConeCode& code) {
  BitTupleSeq out(BitTuple{0, code.r});
  std::map<long, std::uint32_t> bits;
  for (const auto& [i, n] : code.selected) bits[n] |= (1u << i);
  for (const auto& [n, b] : bits) out.set(n, BitTuple{b, code.r});
  return out;
}

FullConeCode fullcone_decode(const BitTupleSeq& seq) {
  FullConeCode out{seq.default_symbol().r, {}};
  for (const auto& [n, tup] : seq.exceptions())
    for (int i = 0; i < tup.r; ++i)
      if (tup.bits & (1u << i)) out.selected.insert({i, n});
  return out;
}

Subtree fullcone_geometry(const FullConeCode& code) {
  std::map<long, double> legs;
  for (const auto& [i, n] : code.selected) {
    long node = n * code.r + i;
    legs[node] = dendrite_leg_length(node);
  }
  return Subtree(-1.0, 1.0, std::move(legs));
}

double fullcone_geometry_floor(int r, long window) {
  // distance from each in-window leg tip to the spine plus every other
  // in-window full leg
  long slots = window * static_cast<long>(r);
  double floor = 1e300;
  for (long m = -slots; m <= slots; ++m) {
    double tip_h = dendrite_leg_length(m);
    double best = tip_h;  // straight down to the spine
    for (long m2 = -slots; m2 <= slots; ++m2) {
      if (m2 == m) continue;
      double dx = dendrite_anchor(m) - dendrite_anchor(m2);
      double dy = tip_h > dendrite_leg_length(m2) ? tip_h - dendrite_leg_length(m2) : 0.0;
      best = std::min(best, std::hypot(dx, dy));
    }
    floor = std::min(floor, best);
  }
  return floor;
}

std::vector<double> leg_separation_table(long window) {
  std::vector<double> out;
  for (long m = -window; m < window; ++m)
    out.push_back(dendrite_anchor(m + 1) - dendrite_anchor(m));
  return out;
}

}  // namespace hyperlab
