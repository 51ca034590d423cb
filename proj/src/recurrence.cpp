#include "hyperlab/recurrence.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperlab {

namespace {

std::vector<CirclePoint> periodic_point_list(const MorseSmaleCircleMap& m) {
  std::vector<CirclePoint> out;
  for (const auto& fp : m.fixed_points()) out.push_back(fp.point);
  return out;
}

void require_off_fixed_set(const MorseSmaleCircleMap& m, CirclePoint x) {
  for (const auto& fp : m.fixed_points())
    if (circle_distance(fp.point, x) < 1e-9)
      throw std::invalid_argument("base point lies on the periodic set");
}

}  // namespace

OrbitClosureApprox build_orbit_closure(const MorseSmaleCircleMap& m, CirclePoint x,
                                       int stride, int truncation) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (truncation < 0) throw std::invalid_argument("truncation must be >= 0");
  require_off_fixed_set(m, x);

  std::vector<CirclePoint> pts = periodic_point_list(m);
  // forward chain is iterated exactly; backward chain uses the inverse
  CirclePoint fwd = x, bwd = x;
  pts.push_back(x);
  for (int i = 1; i <= truncation; ++i) {
    for (int s = 0; s < stride; ++s) fwd = m.eval(fwd);
    for (int s = 0; s < stride; ++s) bwd = m.invert(bwd);
    pts.push_back(fwd);
    pts.push_back(bwd);
  }
  CircleSubset set(pts);

  CircleSubset stepped = set;
  for (int s = 0; s < stride; ++s) stepped = induced_2f_step(m, stepped);
  double defect = hausdorff_finite_value(stepped, set);
  return {x, stride, truncation, set, defect};
}

HomoclinicWitnessReport homoclinic_witness(const MorseSmaleCircleMap& m,
                                           CirclePoint x, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  require_off_fixed_set(m, x);

  std::vector<CirclePoint> fix = periodic_point_list(m);
  std::vector<CirclePoint> kpts = fix;
  kpts.push_back(x);
  CircleSubset K(kpts);

  HomoclinicWitnessReport rep{K, 0.0, 0.0, true, {}, {}};

  // forward orbit of the single moving strand
  std::vector<CirclePoint> orbit(window + 1);
  orbit[0] = x;
  for (int n = 1; n <= window; ++n) orbit[n] = m.eval(orbit[n - 1]);

  double eps_star = 1.0;
  double min_return_dist = 1.0;
  CircleSubset iterated = K;
  for (int n = 1; n <= window; ++n) {
    iterated = induced_2f_step(m, iterated);
    std::vector<CirclePoint> expect = fix;
    expect.push_back(orbit[n]);
    if (!(iterated == CircleSubset(expect))) rep.forward_identity_ok = false;
    eps_star = std::min(eps_star, hausdorff_finite_value(K, iterated));
    min_return_dist = std::min(min_return_dist, circle_distance(orbit[n], x));
  }
  rep.eps_star = eps_star;
  rep.eps_floor = 0.5 * min_return_dist;

  // non-wandering approximants K_j = K u {f^{-j}(x)}; their j-step forward
  // image is evaluated through the exact identity (2^f)^j(K_j) =
  // (2^f)^j(K) u {x} -- naive forward iteration of the inverted strand
  // would amplify the inversion tolerance by Lip^j
  CirclePoint back = x;
  CircleSubset img_K = K;
  for (int j = 1; j <= window; ++j) {
    back = m.invert(back);
    std::vector<CirclePoint> kj = kpts;
    kj.push_back(back);
    CircleSubset Kj(kj);
    rep.approach.push_back(hausdorff_finite_value(Kj, K));
    img_K = induced_2f_step(m, img_K);
    std::vector<CirclePoint> img_pts = img_K.points();
    img_pts.push_back(x);
    rep.return_approach.push_back(hausdorff_finite_value(CircleSubset(img_pts), K));
  }
  return rep;
}

std::vector<PeriodicContinuum> enumerate_fixed_continua(const MorseSmaleCircleMap& m) {
  std::vector<CirclePoint> per = periodic_point_list(m);
  std::vector<PeriodicContinuum> out;
  auto classify = [&](const CircleContinuum& c) {
    CircleContinuum once = induced_Cf_step(m, c);
    if (once == c) {
      out.push_back({c, 1});
      return;
    }
    if (induced_Cf_step(m, once) == c) out.push_back({c, 2});
  };
  for (const auto& p : per) classify(CircleContinuum::point(p));
  for (const auto& a : per)
    for (const auto& b : per)
      if (!(a == b)) classify(CircleContinuum::arc(a, b));
  out.push_back({CircleContinuum::full_circle(), 1});
  return out;
}

WanderingCertificate wandering_certificate(const MorseSmaleCircleMap& m,
                                           const CircleContinuum& I, double eps,
                                           double grid_eta, int window) {
  WanderingCertificate cert;
  if (I.kind() != ContinuumKind::kArc || !(eps > 0.0) || window < 1)
    throw std::invalid_argument("wandering_certificate: need an arc, eps > 0, window >= 1");
  // a D-arc is a fixed continuum, hence never wandering
  bool a_fixed = false, b_fixed = false;
  for (const auto& fp : m.fixed_points()) {
    if (circle_distance(fp.point, I.a()) < 1e-9) a_fixed = true;
    if (circle_distance(fp.point, I.b()) < 1e-9) b_fixed = true;
  }
  if (a_fixed && b_fixed) {
    cert.status = CertificateStatus::kPreconditionViolation;
    return cert;
  }

  const int n_grid = static_cast<int>(std::lround(1.0 / grid_eta));
  // return time distance for one candidate arc
  auto return_dist = [&](CircleContinuum J) {
    double best = 1.0;
    for (int n = 1; n <= window; ++n) {
      J = induced_Cf_step(m, J);
      best = std::min(best, hausdorff_continua_value(J, I));
    }
    return best;
  };

  // Feasibility threshold: t works iff every grid arc with d_H(J,I) < t has
  // all of its first `window` iterates at distance > t from I.  Each arc J
  // contributes the constraint t < ret(J) or t <= d_H(J,I).
  double t = eps;
  double min_ret = 1.0;
  for (int ia = 0; ia < n_grid; ++ia) {
    CirclePoint a(static_cast<double>(ia) / n_grid);
    for (int ib = 0; ib < n_grid; ++ib) {
      if (ia == ib) continue;
      CirclePoint b(static_cast<double>(ib) / n_grid);
      CircleContinuum J = CircleContinuum::arc(a, b);
      double dJI = hausdorff_continua_value(J, I);
      ++cert.grid_arcs_examined;
      if (dJI >= eps) continue;
      ++cert.neighbourhood_arcs;
      double ret = return_dist(J);
      min_ret = std::min(min_ret, ret);
      double cap = ret > dJI ? ret : dJI;
      if (cap < t) t = cap;
    }
  }
  cert.min_return_in_neighbourhood = min_ret;
  double t_final = t * (1.0 - 1e-9);
  if (t_final <= grid_eta) {
    cert.status = CertificateStatus::kInconclusive;
    cert.eps_prime = t_final;
    return cert;
  }
  cert.status = CertificateStatus::kCertified;
  cert.eps_prime = t_final;
  return cert;
}

}  // namespace hyperlab
