#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyperlab/hyperspace.hpp"

namespace hyperlab {

/// Abstract invertible system on a sampled carrier: everything the
/// separated-set machinery needs, nothing else.
template <class P>
struct MetricSystem {
  std::string name;
  std::function<double(const P&, const P&)> metric;
  std::function<P(const P&)> forward;
  std::function<P(const P&)> inverse;  // empty when unavailable
  std::function<std::vector<P>(std::uint64_t seed, std::size_t count)> sample;
};

enum class TimeDirection { kForward, kBackward };

template <class P>
double dn_distance(const MetricSystem<P>& sys, const P& x, const P& y, int n,
                   TimeDirection dir = TimeDirection::kForward) {
  if (n < 1) throw std::invalid_argument("dn_distance: n >= 1 required");
  if (dir == TimeDirection::kBackward && !sys.inverse)
    throw std::invalid_argument("dn_distance: system has no inverse");
  const auto& step = dir == TimeDirection::kForward ? sys.forward : sys.inverse;
  P a = x, b = y;
  double best = sys.metric(a, b);
  for (int i = 1; i < n; ++i) {
    a = step(a);
    b = step(b);
    best = std::max(best, sys.metric(a, b));
  }
  return best;
}

/// Greedy maximal-by-inclusion (n, eps)-separated subset of the samples, in
/// sample order; its size lower-bounds s(n, eps) on the sampled subsystem.
template <class P>
std::vector<P> greedy_separated(const MetricSystem<P>& sys, const std::vector<P>& samples,
                                int n, double eps,
                                TimeDirection dir = TimeDirection::kForward) {
  if (n < 1) throw std::invalid_argument("greedy_separated: n >= 1 required");
  const auto& step = dir == TimeDirection::kForward ? sys.forward : sys.inverse;
  if (!step) throw std::invalid_argument("greedy_separated: missing step map");
  // orbit table so each pair costs O(n) metric evaluations
  std::vector<std::vector<P>> orbits;
  orbits.reserve(samples.size());
  for (const auto& s : samples) {
    std::vector<P> row{s};
    row.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) row.push_back(step(row.back()));
    orbits.push_back(std::move(row));
  }
  auto dn = [&](std::size_t i, std::size_t j) {
    double best = 0.0;
    for (int t = 0; t < n; ++t)
      best = std::max(best, sys.metric(orbits[i][static_cast<std::size_t>(t)],
                                       orbits[j][static_cast<std::size_t>(t)]));
    return best;
  };
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    bool separated = true;
    for (std::size_t k : kept)
      if (dn(i, k) <= eps) {
        separated = false;
        break;
      }
    if (separated) kept.push_back(i);
  }
  std::vector<P> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(samples[k]);
  return out;
}

struct SeparatedRow {
  int n = 0;
  double eps = 0.0;
  std::size_t count = 0;
  std::string method;  // "greedy" or "exact"
  double estimate = 0.0;  // log(count)/n
};

struct SeparatedReport {
  std::vector<SeparatedRow> rows;
  double extrapolated_h = 0.0;  // max over eps of the tail slope of log count
  bool partial = false;
};

/// Least-squares slope of y over x (expects equal sizes >= 2).
double tail_slope(const std::vector<double>& x, const std::vector<double>& y);

template <class P>
SeparatedReport entropy_estimate(const MetricSystem<P>& sys,
                                 const std::vector<double>& eps_schedule,
                                 const std::vector<int>& n_schedule,
                                 std::size_t budget, std::uint64_t seed,
                                 TimeDirection dir = TimeDirection::kForward) {
  if (eps_schedule.empty() || n_schedule.empty())
    throw std::invalid_argument("entropy_estimate: schedules must be nonempty");
  for (std::size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw std::invalid_argument("entropy_estimate: eps schedule must decrease");
  for (std::size_t i = 1; i < n_schedule.size(); ++i)
    if (!(n_schedule[i] > n_schedule[i - 1]))
      throw std::invalid_argument("entropy_estimate: n schedule must increase");

  SeparatedReport rep;
  if (budget == 0) {
    rep.partial = true;
    return rep;
  }
  std::vector<P> samples = sys.sample(seed, budget);
  rep.extrapolated_h = 0.0;
  for (double eps : eps_schedule) {
    std::vector<double> xs, ys;
    for (int n : n_schedule) {
      auto set = greedy_separated(sys, samples, n, eps, dir);
      SeparatedRow row{n, eps, set.size(), "greedy",
                       std::log(static_cast<double>(set.size())) / n};
      rep.rows.push_back(row);
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(static_cast<double>(set.size())));
    }
    std::size_t tail = std::min<std::size_t>(3, xs.size());
    if (tail >= 2) {
      std::vector<double> tx(xs.end() - static_cast<long>(tail), xs.end());
      std::vector<double> ty(ys.end() - static_cast<long>(tail), ys.end());
      rep.extrapolated_h = std::max(rep.extrapolated_h, tail_slope(tx, ty));
    }
  }
  return rep;
}

/// Ready-made systems over the circle model family.
MetricSystem<CirclePoint> circle_point_system(const MorseSmaleCircleMap& m);
MetricSystem<CirclePoint> rigid_rotation_system(double alpha);
MetricSystem<CircleContinuum> circle_arc_system(const MorseSmaleCircleMap& m);

/// Indicator coding of a finite set against the forward/backward orbit grid
/// of the base points: bit (k, n) records whether f^n(y_k) lies in A.
struct OrbitGridCoding {
  int r = 0;
  int window = 0;
  std::vector<std::vector<CirclePoint>> grid;  // [k][n + window]
  std::vector<std::vector<std::uint8_t>> bits;  // [k][n + window]
};

OrbitGridCoding coding_phi_finite(const MorseSmaleCircleMap& m,
                                  const std::vector<CirclePoint>& bases,
                                  const CircleSubset& A, int window);

/// 2^{r n} finite subsets realizing an exact (n, delta)-separated family:
/// one subset per bit pattern over the r x n orbit grid, anchored at the
/// bounding fixed points.
struct ExactSeparatedFamily {
  int r = 0;
  int n = 0;
  double delta = 0.0;       // half the minimum grid spacing
  double min_spacing = 0.0;
  std::vector<CirclePoint> bases;
  std::vector<CircleSubset> subsets;  // size 2^{r n}
  double estimate = 0.0;              // log(2^{r n}) / n = r log 2
  double estimate_naive = 0.0;        // log(count)/n evaluated directly
};

ExactSeparatedFamily exact_separated_lower_bound_coding(const MorseSmaleCircleMap& m,
                                                        int r, int n);

/// Exhaustive pairwise verification that the family is (n, delta)-separated
/// under the induced-map d_n; returns the smallest pairwise d_n.
double verify_exact_family(const MorseSmaleCircleMap& m, const ExactSeparatedFamily& fam);

}  // namespace hyperlab
