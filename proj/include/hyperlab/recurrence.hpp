#pragma once

#include <vector>

#include "hyperlab/hyperspace.hpp"

namespace hyperlab {

/// Truncated orbit closure {f^{k i}(x): |i| <= m} plus all fixed points,
/// with its one-step-under-(2^f)^k approximation defect.
struct OrbitClosureApprox {
  CirclePoint base;
  int stride = 1;
  int truncation = 0;
  CircleSubset points;
  double defect = 0.0;
};

OrbitClosureApprox build_orbit_closure(const MorseSmaleCircleMap& m, CirclePoint x,
                                       int stride, int truncation);

/// Certificate that K = Fix(f) u {x} returns to every neighbourhood of
/// itself without ever being recurrent.
struct HomoclinicWitnessReport {
  CircleSubset witness;          // K
  double eps_star = 0.0;         // min_n d_H(K, (2^f)^n K) over the window
  double eps_floor = 0.0;        // analytic lower bound for eps_star
  bool forward_identity_ok = false;  // (2^f)^n(K) == Fix u {f^n x} for all n
  std::vector<double> approach;       // d_H(K_j, K), j = 1..N
  std::vector<double> return_approach;  // d_H((2^f)^j(K_j), K), j = 1..N
};

HomoclinicWitnessReport homoclinic_witness(const MorseSmaleCircleMap& m,
                                           CirclePoint x, int window);

/// All continua fixed by C(f) (plus the period-2 ones when reversing):
/// degenerate arcs at periodic points, arcs with periodic endpoints, and the
/// full circle.  Every returned value satisfies the stated exact periodicity.
struct PeriodicContinuum {
  CircleContinuum continuum;
  int period;  // 1 or 2
};

std::vector<PeriodicContinuum> enumerate_fixed_continua(const MorseSmaleCircleMap& m);

enum class CertificateStatus { kCertified, kInconclusive, kPreconditionViolation };

/// Numerical evidence that the arc I is wandering for C(f): an eps' <= eps
/// such that every grid arc J with d_H(J, I) < eps' keeps all of its first
/// N iterates at distance > eps' from I.
struct WanderingCertificate {
  CertificateStatus status = CertificateStatus::kInconclusive;
  double eps_prime = 0.0;
  std::size_t grid_arcs_examined = 0;
  std::size_t neighbourhood_arcs = 0;  // arcs with d_H(J, I) < eps
  double min_return_in_neighbourhood = 0.0;
};

WanderingCertificate wandering_certificate(const MorseSmaleCircleMap& m,
                                           const CircleContinuum& I, double eps,
                                           double grid_eta, int window);

}  // namespace hyperlab
