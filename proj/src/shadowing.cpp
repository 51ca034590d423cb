#include "hyperlab/shadowing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

#include "hyperlab/parallel.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {

namespace {

struct AttractorRepellerPair {
  CirclePoint attractor;
  CirclePoint repeller;
  double spacing;  // distance between them
};

AttractorRepellerPair consecutive_pair(const MorseSmaleCircleMap& m) {
  if (m.orientation() != Orientation::kPreserving)
    throw std::invalid_argument(
        "splice pseudo-orbit requires an orientation-preserving map; pass f^2 "
        "for the reversing case");
  // fixed points sit at j/(2k): repeller at 0, attractor at 1/(2k)
  double half = 1.0 / (2.0 * m.pairs());
  return {CirclePoint(half), CirclePoint(0.0), half};
}

}  // namespace

PseudoOrbitCheck verify_pseudo_orbit(const MorseSmaleCircleMap& m,
                                     const PseudoOrbit<CircleContinuum>& po) {
  PseudoOrbitCheck out;
  for (int i = -po.window; i < po.window; ++i) {
    double g = hausdorff_continua_value(m.image(po.at(i)), po.at(i + 1));
    out.max_gap = std::max(out.max_gap, g);
  }
  out.ok = out.max_gap <= po.gap;
  return out;
}

PseudoOrbit<CircleContinuum> build_splice_pseudo_orbit(const MorseSmaleCircleMap& m,
                                                         double delta, int window) {
  if (!(delta > 0.0) || window < 1)
    throw std::invalid_argument("need delta > 0 and window >= 1");
  auto pq = consecutive_pair(m);
  if (!(delta < pq.spacing))
    throw std::invalid_argument("delta too large: the two collars must be disjoint");

  CirclePoint p = pq.attractor, q = pq.repeller;
  PseudoOrbit<CircleContinuum> po;
  po.window = window;
  po.gap = delta;
  po.states.assign(static_cast<std::size_t>(2 * window + 1),
                   CircleContinuum::full_circle());

  po.at(0) = CircleContinuum::full_circle();
  // arc containing p but not q, within delta/2 of the full circle
  po.at(1) = CircleContinuum::arc(CirclePoint(q.coord() + 0.5 * delta),
                                  CirclePoint(q.coord() - 0.5 * delta));
  po.at(-1) = CircleContinuum::arc(CirclePoint(p.coord() + 0.5 * delta),
                                   CirclePoint(p.coord() - 0.5 * delta));
  for (int i = 1; i < window; ++i) po.at(i + 1) = m.image(po.at(i));
  for (int i = 1; i < window; ++i) po.at(-i - 1) = m.preimage(po.at(-i));
  return po;
}

namespace {

// Candidate enumeration: id 0 is the full circle, ids [1, G] the grid
// points, the rest the ordered grid-endpoint arcs.
struct CandidateSpace {
  int grid = 0;
  std::uint64_t total() const {
    auto g = static_cast<std::uint64_t>(grid);
    return 1 + g + g * (g - 1);
  }
  CircleContinuum make(std::uint64_t id) const {
    auto g = static_cast<std::uint64_t>(grid);
    if (id == 0) return CircleContinuum::full_circle();
    if (id <= g) return CircleContinuum::point(CirclePoint(static_cast<double>(id - 1) / grid));
    std::uint64_t a = (id - g - 1) / (g - 1);
    std::uint64_t rest = (id - g - 1) % (g - 1);
    std::uint64_t b = rest >= a ? rest + 1 : rest;
    return CircleContinuum::arc(CirclePoint(static_cast<double>(a) / grid),
                                CirclePoint(static_cast<double>(b) / grid));
  }
};

}  // namespace

FalsificationReport falsify_Cf_shadowing(const MorseSmaleCircleMap& m, double epsilon,
                                         double delta, int window, double grid_eta,
                                         bool keep_failures,
                                         std::uint64_t audit_seed) {
  auto pq = consecutive_pair(m);
  // pairwise disjoint eps-balls around {p}, {q}, S^1 in the Hausdorff metric
  if (!(2.0 * epsilon < pq.spacing) || !(2.0 * epsilon < 0.5))
    throw std::invalid_argument("epsilon too large for disjoint Hausdorff balls");

  auto po = build_splice_pseudo_orbit(m, delta, window);
  auto check = verify_pseudo_orbit(m, po);
  if (!check.ok) throw std::runtime_error("internal: splice pseudo-orbit gap exceeds delta");

  const int N = window;
  CandidateSpace space{static_cast<int>(std::lround(1.0 / grid_eta))};
  const std::uint64_t total = space.total();

  // orbit table for every grid point, indices -N..N
  const int G = space.grid;
  std::vector<std::vector<double>> orbit(static_cast<std::size_t>(G));
  for (int g = 0; g < G; ++g) {
    auto& row = orbit[static_cast<std::size_t>(g)];
    row.assign(static_cast<std::size_t>(2 * N + 1), 0.0);
    CirclePoint x(static_cast<double>(g) / G);
    row[static_cast<std::size_t>(N)] = x.coord();
    CirclePoint fwd = x, bwd = x;
    for (int i = 1; i <= N; ++i) {
      fwd = m.eval(fwd);
      bwd = m.invert(bwd);
      row[static_cast<std::size_t>(N + i)] = fwd.coord();
      row[static_cast<std::size_t>(N - i)] = bwd.coord();
    }
  }
  auto iterate_candidate = [&](const CircleContinuum& c, std::uint64_t id, int i) {
    if (c.kind() == ContinuumKind::kFullCircle) return c;
    auto g = static_cast<std::uint64_t>(G);
    if (c.kind() == ContinuumKind::kPoint) {
      std::uint64_t ga = id - 1;
      return CircleContinuum::point(CirclePoint(orbit[ga][static_cast<std::size_t>(N + i)]));
    }
    std::uint64_t a = (id - g - 1) / (g - 1);
    std::uint64_t rest = (id - g - 1) % (g - 1);
    std::uint64_t b = rest >= a ? rest + 1 : rest;
    double ia = orbit[a][static_cast<std::size_t>(N + i)];
    double ib = orbit[b][static_cast<std::size_t>(N + i)];
    if (ia == ib) return CircleContinuum::point(CirclePoint(ia));
    return CircleContinuum::arc(CirclePoint(ia), CirclePoint(ib));
  };

  // pre-draw the audited candidate ids
  std::set<std::uint64_t> audit_ids;
  {
    Rng rng(audit_seed);
    while (audit_ids.size() < std::min<std::uint64_t>(100, total))
      audit_ids.insert(rng.below(total));
  }

  CirclePoint q = pq.repeller;
  FalsificationReport rep;
  rep.epsilon = epsilon;
  rep.delta = delta;
  rep.keep_failures = keep_failures;

  const std::size_t chunk = 1 << 14;
  std::size_t n_chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  std::vector<double> chunk_margin(n_chunks, 1e300);
  std::vector<std::uint64_t> chunk_survivors(n_chunks, 0);
  std::vector<std::vector<CandidateFailure>> chunk_failures(n_chunks);
  std::mutex audit_mu;
  std::vector<std::pair<std::uint64_t, CandidateFailure>> audit_records;

  parallel_chunks(static_cast<std::size_t>(total), chunk,
                  [&](std::size_t ci, std::size_t beg, std::size_t end) {
    auto& local_failures = chunk_failures[ci];
    for (std::uint64_t id = beg; id < end; ++id) {
      CircleContinuum cand = space.make(id);
      bool contains_q = cand.contains(q);
      // scan order realizes the dichotomy: candidates containing the
      // repeller are driven away forward, the others backward
      int found_index = 0;
      double found_margin = -1e300;
      bool failed = false;
      // failures are recorded only with a margin above kMarginFloor, so the
      // strict inequality d_H > epsilon is numerically meaningful; borderline
      // indices are skipped in favour of the divergent tail
      constexpr double kMarginFloor = 1e-9;
      auto probe = [&](int i) {
        double d = hausdorff_continua_value(iterate_candidate(cand, id, i), po.at(i));
        if (d > epsilon + kMarginFloor) {
          found_index = i;
          found_margin = d - epsilon;
          failed = true;
          return true;
        }
        found_margin = std::max(found_margin, d - epsilon);
        return false;
      };
      bool done = probe(0);
      if (!done && contains_q)
        for (int i = 1; i <= N && !done; ++i) done = probe(i);
      if (!done)
        for (int i = 1; i <= N && !done; ++i) done = probe(-i);
      if (!done && !contains_q)
        for (int i = 1; i <= N && !done; ++i) done = probe(i);

      if (!failed) ++chunk_survivors[ci];
      chunk_margin[ci] = std::min(chunk_margin[ci], found_margin);
      CandidateFailure cf{static_cast<std::uint32_t>(cand.kind() == ContinuumKind::kPoint ? 0
                                                     : cand.kind() == ContinuumKind::kArc ? 1
                                                                                          : 2),
                          cand.a().coord(), cand.b().coord(), found_index, found_margin};
      if (keep_failures) local_failures.push_back(cf);
      if (audit_ids.count(id)) {
        std::lock_guard<std::mutex> lock(audit_mu);
        audit_records.emplace_back(id, cf);
      }
    }
  });

  rep.candidates_tested = total;
  rep.worst_margin = 1e300;
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {
    rep.survivors += chunk_survivors[ci];
    rep.worst_margin = std::min(rep.worst_margin, chunk_margin[ci]);
    if (keep_failures)
      rep.failures.insert(rep.failures.end(), chunk_failures[ci].begin(),
                          chunk_failures[ci].end());
  }
  rep.verdict = rep.survivors == 0 && rep.worst_margin > 0.0
                    ? FalsificationVerdict::kFalsified
                    : FalsificationVerdict::kInconclusive;

  // audit: re-evaluate the recorded failing index through the continuum API
  std::sort(audit_records.begin(), audit_records.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  rep.audit_samples = audit_records.size();
  for (const auto& [id, cf] : audit_records) {
    CircleContinuum c = space.make(id);
    int i = cf.index;
    for (int s = 0; s < i; ++s) c = m.image(c);
    for (int s = 0; s > i; --s) c = m.preimage(c);
    double d = hausdorff_continua_value(c, po.at(i));
    if (cf.margin > 0.0 && !(d > epsilon)) rep.audit_ok = false;
    if (std::fabs(d - (epsilon + cf.margin)) > 1e-9) rep.audit_ok = false;
  }
  return rep;
}

Shadow2fResult shadow_finite_2f(const MorseSmaleCircleMap& m,
                                const std::vector<std::vector<CirclePoint>>& strands,
                                int window, double epsilon, double search_eta) {
  if (strands.empty()) throw std::invalid_argument("no strands");
  const std::size_t len = static_cast<std::size_t>(2 * window + 1);
  for (const auto& s : strands)
    if (s.size() != len) throw std::invalid_argument("strand length != 2*window+1");

  Shadow2fResult out{false, CircleSubset({CirclePoint(0.0)}), 0.0, 0.0, {}};
  // gap verification of the supplied strands
  for (const auto& strand : strands)
    for (std::size_t i = 0; i + 1 < strand.size(); ++i)
      out.max_strand_gap = std::max(
          out.max_strand_gap, circle_distance(m.eval(strand[i]), strand[i + 1]));

  auto objective = [&](const std::vector<CirclePoint>& strand, CirclePoint z,
                       double abort_above) {
    double sup = circle_distance(z, strand[static_cast<std::size_t>(window)]);
    CirclePoint fwd = z, bwd = z;
    for (int i = 1; i <= window && sup < abort_above; ++i) {
      fwd = m.eval(fwd);
      bwd = m.invert(bwd);
      sup = std::max(sup, circle_distance(fwd, strand[static_cast<std::size_t>(window + i)]));
      sup = std::max(sup, circle_distance(bwd, strand[static_cast<std::size_t>(window - i)]));
    }
    return sup;
  };

  std::vector<CirclePoint> seeds;
  for (const auto& strand : strands) {
    CirclePoint center = strand[static_cast<std::size_t>(window)];
    // a successful seed must start within epsilon of x_0; search that ball
    double radius = 2.0 * epsilon;
    int steps = static_cast<int>(std::ceil(2.0 * radius / search_eta));
    double best = 1e300;
    CirclePoint best_z = center;
    for (int s = 0; s <= steps; ++s) {
      CirclePoint z(center.coord() - radius + s * search_eta);
      double v = objective(strand, z, best);
      if (v < best) {
        best = v;
        best_z = z;
      }
    }
    out.strands.push_back({best_z, best});
    seeds.push_back(best_z);
  }

  // independent re-evaluation of the union under the induced map
  CircleSubset A(seeds);
  out.shadow = A;
  std::vector<CircleSubset> states;
  states.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<CirclePoint> pts;
    for (const auto& s : strands) pts.push_back(s[i]);
    states.emplace_back(pts);
  }
  double sup = hausdorff_finite_value(A, states[static_cast<std::size_t>(window)]);
  CircleSubset fwd = A, bwd = A;
  for (int i = 1; i <= window; ++i) {
    fwd = induced_2f_step(m, fwd);
    bwd = induced_2f_inverse_step(m, bwd);
    sup = std::max(sup, hausdorff_finite_value(fwd, states[static_cast<std::size_t>(window + i)]));
    sup = std::max(sup, hausdorff_finite_value(bwd, states[static_cast<std::size_t>(window - i)]));
  }
  out.sup_distance = sup;
  out.success = sup <= epsilon;
  return out;
}

std::optional<std::vector<std::vector<CirclePoint>>> decompose_strands(
    const std::vector<CircleSubset>& states) {
  if (states.empty()) return std::nullopt;
  std::size_t s = states.front().size();
  for (const auto& st : states)
    if (st.size() != s) return std::nullopt;

  std::vector<std::vector<CirclePoint>> strands(s);
  for (std::size_t j = 0; j < s; ++j) strands[j].push_back(states[0].points()[j]);
  for (std::size_t i = 1; i < states.size(); ++i) {
    std::vector<bool> used(s, false);
    for (std::size_t j = 0; j < s; ++j) {
      const CirclePoint cur = strands[j].back();
      double best = 1e300;
      std::size_t arg = s;
      for (std::size_t t = 0; t < s; ++t) {
        if (used[t]) continue;
        double d = circle_distance(cur, states[i].points()[t]);
        if (d < best) {
          best = d;
          arg = t;
        }
      }
      if (arg == s) return std::nullopt;
      used[arg] = true;
      strands[j].push_back(states[i].points()[arg]);
    }
  }
  return strands;
}

}  // namespace hyperlab
