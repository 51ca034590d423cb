#include "hyperlab/shadowing.hpp"

#include <cmath>

#include "doctest.h"
#include "hyperlab/rng.hpp"

using namespace hyperlab;

namespace {

const MorseSmaleCircleMap kMap(1, 0.1);

PseudoOrbit<CircleContinuum> exact_orbit_segment(CircleContinuum start, int window) {
  PseudoOrbit<CircleContinuum> po;
  po.window = window;
  po.gap = 1e-3;
  po.states.assign(static_cast<std::size_t>(2 * window + 1), start);
  for (int i = 1; i <= window; ++i) po.at(i) = kMap.image(po.at(i - 1));
  for (int i = 1; i <= window; ++i) po.at(-i) = kMap.preimage(po.at(-i + 1));
  return po;
}

// random labeled strand pseudo-orbit with per-step noise below the gap
std::vector<std::vector<CirclePoint>> random_strands(Rng& rng, int s, int window,
                                                     double delta) {
  std::vector<std::vector<CirclePoint>> strands;
  double lip = kMap.lipschitz();
  for (int j = 0; j < s; ++j) {
    std::vector<CirclePoint> strand(static_cast<std::size_t>(2 * window + 1));
    strand[static_cast<std::size_t>(window)] = CirclePoint(rng.uniform01());
    for (int i = 1; i <= window; ++i) {
      CirclePoint next = kMap.eval(strand[static_cast<std::size_t>(window + i - 1)]);
      strand[static_cast<std::size_t>(window + i)] =
          CirclePoint(next.coord() + rng.uniform(-delta, delta));
      // backward: perturb the preimage so the forward gap stays below delta
      CirclePoint prev = kMap.invert(strand[static_cast<std::size_t>(window - i + 1)]);
      strand[static_cast<std::size_t>(window - i)] =
          CirclePoint(prev.coord() + rng.uniform(-delta / lip, delta / lip));
    }
    strands.push_back(strand);
  }
  return strands;
}

}  // namespace

TEST_CASE("verify_pseudo_orbit on exact and perturbed segments") {
  auto po = exact_orbit_segment(CircleContinuum::arc(CirclePoint(0.1), CirclePoint(0.3)), 10);
  auto chk = verify_pseudo_orbit(kMap, po);
  CHECK(chk.ok);
  CHECK(chk.max_gap <= 1e-12);

  double delta = po.gap;
  auto half = po;
  half.at(3) = CircleContinuum::arc(
      CirclePoint(half.at(3).a().coord() + 0.5 * delta), half.at(3).b());
  auto chk2 = verify_pseudo_orbit(kMap, half);
  CHECK(chk2.ok);
  CHECK(chk2.max_gap == doctest::Approx(0.5 * delta).epsilon(1e-9));

  auto bad = po;
  bad.at(3) = CircleContinuum::arc(
      CirclePoint(bad.at(3).a().coord() + 2.0 * delta), bad.at(3).b());
  CHECK_FALSE(verify_pseudo_orbit(kMap, bad).ok);
}

TEST_CASE("splice pseudo-orbit has gaps only at the splices") {
  auto po = build_splice_pseudo_orbit(kMap, 0.01, 60);
  auto chk = verify_pseudo_orbit(kMap, po);
  CHECK(chk.ok);
  CHECK(chk.max_gap <= 0.01);
  CHECK(chk.max_gap > 0.0);
  // gap at index 0 equals the collar half-width
  CHECK(hausdorff_continua_value(kMap.image(po.at(0)), po.at(1)) ==
        doctest::Approx(0.005).epsilon(1e-12));
  // away from the splices the orbit is exact
  for (int i = 1; i < 60; ++i)
    CHECK(hausdorff_continua_value(kMap.image(po.at(i)), po.at(i + 1)) == 0.0);
}

TEST_CASE("splice pseudo-orbit tails collapse onto the fixed points") {
  auto po = build_splice_pseudo_orbit(kMap, 0.01, 60);
  // forward tail: degenerate limit at the attractor (both endpoints approach
  // 1/2 from opposite sides)
  CHECK(hausdorff_continua_value(po.at(60), CircleContinuum::point(CirclePoint(0.5))) <=
        1e-4);
  CHECK(hausdorff_continua_value(po.at(-60), CircleContinuum::point(CirclePoint(0.0))) <=
        1e-4);
}

TEST_CASE("delta too large for disjoint collars is rejected") {
  CHECK_THROWS_AS(build_splice_pseudo_orbit(kMap, 0.6, 10), std::invalid_argument);
}

TEST_CASE("falsifier on a coarse grid: verdict falsified with sound audit") {
  auto rep = falsify_Cf_shadowing(kMap, 0.1, 0.01, 60, 1.0 / 40, true, 99);
  CHECK(rep.verdict == FalsificationVerdict::kFalsified);
  CHECK(rep.candidates_tested == 1 + 40 + 40 * 39);
  CHECK(rep.survivors == 0);
  CHECK(rep.worst_margin > 0.0);
  CHECK(rep.audit_samples >= 100 * 0 + 50);  // at least min(100, total)/2 sampled
  CHECK(rep.audit_ok);
  // every candidate record carries a positive failure margin
  for (const auto& cf : rep.failures) CHECK(cf.margin > 0.0);
}

TEST_CASE("specific candidates fail on the dichotomy side") {
  const int N = 60;
  auto po = build_splice_pseudo_orbit(kMap, 0.01, N);
  const double eps = 0.1;

  // the full circle fails at a forward index: the pseudo-orbit leaves the
  // Hausdorff ball around S^1
  bool full_fails_forward = false;
  for (int i = 0; i <= N; ++i)
    if (hausdorff_continua_value(CircleContinuum::full_circle(), po.at(i)) > eps) {
      full_fails_forward = true;
      break;
    }
  CHECK(full_fails_forward);

  // the degenerate candidate at the attractor fails at a backward index
  auto p_cand = CircleContinuum::point(CirclePoint(0.5));
  bool p_fails_backward = false;
  for (int i = 0; i >= -N; --i)
    if (hausdorff_continua_value(p_cand, po.at(i)) > eps) {
      p_fails_backward = true;
      break;
    }
  CHECK(p_fails_backward);
}

TEST_CASE("monotonicity: failure indices persist when the window grows") {
  auto rep30 = falsify_Cf_shadowing(kMap, 0.1, 0.01, 30, 1.0 / 20, true, 7);
  auto rep60 = falsify_Cf_shadowing(kMap, 0.1, 0.01, 60, 1.0 / 20, true, 7);
  CHECK(rep30.verdict == FalsificationVerdict::kFalsified);
  CHECK(rep60.verdict == FalsificationVerdict::kFalsified);
  // shared prefix construction: states at shared indices coincide, so a
  // failure found inside the smaller window persists
  auto po30 = build_splice_pseudo_orbit(kMap, 0.01, 30);
  auto po60 = build_splice_pseudo_orbit(kMap, 0.01, 60);
  for (int i = -30; i <= 30; ++i) CHECK(po30.at(i) == po60.at(i));
}

TEST_CASE("shadow_finite_2f recovers exact orbits with zero distance") {
  std::vector<std::vector<CirclePoint>> strands(2);
  for (int j = 0; j < 2; ++j) {
    const int W = 20;
    std::vector<CirclePoint> s(static_cast<std::size_t>(2 * W + 1));
    s[W] = CirclePoint(j == 0 ? 0.2 : 0.7);
    for (int i = 1; i <= W; ++i) {
      s[W + i] = kMap.eval(s[W + i - 1]);
      s[W - i] = kMap.invert(s[W - i + 1]);
    }
    strands[j] = s;
  }
  auto res = shadow_finite_2f(kMap, strands, 20, 0.05, 1e-4);
  CHECK(res.success);
  CHECK(res.sup_distance <= 1e-3);
}

TEST_CASE("shadow_finite_2f shadows random 3-strand pseudo-orbits") {
  Rng rng(42);
  for (int trial = 0; trial < 3; ++trial) {
    auto strands = random_strands(rng, 3, 50, 1e-3);
    auto res = shadow_finite_2f(kMap, strands, 50, 0.05, 1e-4);
    CHECK(res.success);
    CHECK(res.sup_distance <= 0.05);
  }
}

TEST_CASE("coarse single-strand orbit hopping basins is inconclusive at tight eps") {
  // jumps of size 0.3 exceed the feature scale; no orbit tracks them at 0.01
  const int W = 10;
  std::vector<CirclePoint> s(static_cast<std::size_t>(2 * W + 1));
  Rng rng(5);
  for (int i = 0; i <= 2 * W; ++i)
    s[static_cast<std::size_t>(i)] = CirclePoint(i % 2 == 0 ? 0.25 : 0.75);
  auto res = shadow_finite_2f(kMap, {s}, W, 0.01, 1e-3);
  CHECK_FALSE(res.success);
}

TEST_CASE("strand decomposition by nearest neighbour matching") {
  Rng rng(43);
  auto strands = random_strands(rng, 3, 20, 1e-3);
  std::vector<CircleSubset> states;
  for (int i = 0; i <= 40; ++i) {
    std::vector<CirclePoint> pts;
    for (const auto& s : strands) pts.push_back(s[static_cast<std::size_t>(i)]);
    states.emplace_back(pts);
  }
  auto dec = decompose_strands(states);
  REQUIRE(dec.has_value());
  CHECK(dec->size() == 3);
  // each recovered strand is itself a fine pseudo-orbit
  for (const auto& strand : *dec) {
    double max_gap = 0.0;
    for (std::size_t i = 0; i + 1 < strand.size(); ++i)
      max_gap = std::max(max_gap,
                         circle_distance(kMap.eval(strand[i]), strand[i + 1]));
    CHECK(max_gap <= 2e-3);
  }
}
