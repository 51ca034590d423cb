#include "hyperlab/symbolic.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace hyperlab {

double hilbert_metric_D(const RealSeq& s, const RealSeq& t) {
  if (s.default_symbol() != t.default_symbol())
    throw std::invalid_argument("hilbert_metric_D: defaults differ, sum diverges");
  std::set<long> support;
  for (const auto& [n, v] : s.exceptions()) support.insert(n);
  for (const auto& [n, v] : t.exceptions()) support.insert(n);
  double sum = 0.0;
  for (long n : support)
    sum += std::fabs(s.at(n) - t.at(n)) * std::exp2(-static_cast<double>(std::labs(n)));
  return sum;
}

RealSeq sq_fixed_point() { return RealSeq(0.0); }

RealSeq sq_point(long n, int p) {
  if (p < 1) throw std::invalid_argument("sq_point: p >= 1 required");
  RealSeq s(0.0);
  s.set(n, 1.0 / p);
  return s;
}

bool sq_valid(const RealSeq& s) {
  if (s.default_symbol() != 0.0) return false;
  std::set<int> seen;
  for (const auto& [n, v] : s.exceptions()) {
    if (!(v > 0.0) || v > 1.0) return false;
    double pf = 1.0 / v;
    int p = static_cast<int>(std::lround(pf));
    if (p < 1 || std::fabs(v - 1.0 / p) > 1e-15) return false;
    if (!seen.insert(p).second) return false;  // symbol 1/p occurs twice
  }
  return true;
}

std::vector<SqReturnRow> sq_nonwandering_evidence(
    int window, const std::vector<std::pair<long, int>>& samples) {
  if (window < 1) throw std::invalid_argument("window >= 1 required");
  std::vector<SqReturnRow> rows;
  for (auto [n, p] : samples) {
    RealSeq x = sq_point(n, p);
    double best = 1e300;
    RealSeq cur = x;
    for (int k = 1; k <= window; ++k) {
      cur = cur.shifted(+1);
      best = std::min(best, hilbert_metric_D(cur, x));
    }
    double floor = (1.0 / p) * std::exp2(-static_cast<double>(std::labs(n)));
    rows.push_back({n, p, best, floor, best >= floor});
  }
  return rows;
}

BitTupleSeq phi_sq(const std::vector<RealSeq>& A, int r, int window) {
  if (r < 1) throw std::invalid_argument("phi_sq: r >= 1 required");
  for (const auto& x : A)
    if (!sq_valid(x)) throw std::invalid_argument("phi_sq: invalid S_Q point");
  BitTupleSeq out(BitTuple{0, r});
  for (long n = -window; n <= window; ++n) {
    std::uint32_t bits = 0;
    for (int i = 0; i < r; ++i) {
      RealSeq probe = sq_point(n, i + 1);
      for (const auto& x : A)
        if (x == probe) {
          bits |= (1u << i);
          break;
        }
    }
    if (bits != 0) out.set(n, BitTuple{bits, r});
  }
  return out;
}

std::vector<RealSeq> phi_sq_preimage(const BitTupleSeq& target) {
  std::vector<RealSeq> A;
  for (const auto& [n, tup] : target.exceptions())
    for (int i = 0; i < tup.r; ++i)
      if (tup.bits & (1u << i)) A.push_back(sq_point(n, i + 1));
  if (A.empty()) A.push_back(sq_fixed_point());
  return A;
}

RealSeq FiniteMapCoding::phi(int strand, int offset) const {
  if (offset <= 0) return sq_point(-offset, strand + 1);
  return sq_fixed_point();
}

FiniteMapCoding finite_map_coding(const MorseSmaleCircleMap& m,
                                  const std::vector<CirclePoint>& seeds, int window) {
  if (seeds.empty() || window < 1)
    throw std::invalid_argument("finite_map_coding: need seeds and window >= 1");
  FiniteMapCoding out;
  out.r = static_cast<int>(seeds.size());
  out.window = window;

  // fill each strand forward from its deepest backward point so that the
  // tabulated chain is consistent under eval
  for (const auto& seed : seeds) {
    CirclePoint z = seed;
    for (int i = 0; i < window; ++i) z = m.invert(z);
    std::vector<CirclePoint> strand(static_cast<std::size_t>(2 * window + 1));
    strand[0] = z;
    for (int i = 1; i <= 2 * window; ++i)
      strand[static_cast<std::size_t>(i)] = m.eval(strand[static_cast<std::size_t>(i - 1)]);
    out.orbit.push_back(std::move(strand));
  }

  // hypothesis checks: the coding-relevant points (backward strands and the
  // seeds) stay separated from each other, from the fixed set, and from the
  // forward tails
  std::vector<CirclePoint> relevant;
  std::vector<CirclePoint> rest;
  for (const auto& strand : out.orbit)
    for (int off = -window; off <= window; ++off) {
      const CirclePoint& pt = strand[static_cast<std::size_t>(off + window)];
      (off <= 0 ? relevant : rest).push_back(pt);
    }
  for (const auto& fp : m.fixed_points()) rest.push_back(fp.point);
  double min_sep = 1.0;
  for (std::size_t i = 0; i < relevant.size(); ++i) {
    for (std::size_t j = i + 1; j < relevant.size(); ++j)
      min_sep = std::min(min_sep, circle_distance(relevant[i], relevant[j]));
    for (const auto& y : rest)
      min_sep = std::min(min_sep, circle_distance(relevant[i], y));
  }
  out.min_separation = min_sep;
  if (min_sep < 1e-9)
    throw std::invalid_argument(
        "finite_map_coding: strand disjointness fails within tolerance");

  // phi o f = sigma o phi on every tabulated point (one-sided shift)
  out.equivariance_ok = true;
  for (int s = 0; s < out.r; ++s)
    for (int off = -window; off <= window; ++off) {
      RealSeq lhs = off < window ? out.phi(s, off + 1) : sq_fixed_point();
      RealSeq rhs = out.phi(s, off).shifted_one_sided();
      if (!(lhs == rhs)) out.equivariance_ok = false;
      ++out.points_checked;
    }

  // phi is injective on strand points and constant (= a) elsewhere
  out.injective_on_strands = true;
  std::set<std::pair<long, int>> seen;
  for (int s = 0; s < out.r; ++s)
    for (int off = -window; off <= 0; ++off)
      if (!seen.insert({-static_cast<long>(off), s}).second)
        out.injective_on_strands = false;
  out.constant_off_strands = true;
  for (int s = 0; s < out.r; ++s)
    for (int off = 1; off <= window; ++off)
      if (!(out.phi(s, off) == sq_fixed_point())) out.constant_off_strands = false;
  return out;
}

void ConeContinuum::set_height(long n, double h) {
  if (!(h >= 0.0) || h > 1.0)
    throw std::invalid_argument("cone stem height must lie in [0,1]");
  if (h == 1.0)
    h_.erase(n);
  else
    h_[n] = h;
}

ConeContinuum ConeContinuum::stepped(int direction) const {
  ConeContinuum out;
  for (const auto& [n, h] : h_) out.h_[n + direction] = h;
  return out;
}

RealSeq cone_phi(const ConeContinuum& cone) {
  RealSeq out(0.0);
  for (const auto& [n, h] : cone.stems()) out.set(n, 1.0 - h);
  return out;
}

}  // namespace hyperlab
