#include "hyperlab/hyperspace.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyperlab/rng.hpp"

using namespace hyperlab;

namespace {

const MorseSmaleCircleMap kMap(1, 0.1);

CircleContinuum random_continuum(Rng& rng) {
  double roll = rng.uniform01();
  if (roll < 0.1) return CircleContinuum::point(CirclePoint(rng.uniform01()));
  if (roll < 0.15) return CircleContinuum::full_circle();
  CirclePoint a(rng.uniform01()), b(rng.uniform01());
  if (a == b) return CircleContinuum::point(a);
  return CircleContinuum::arc(a, b);
}

// Discretized Hausdorff oracle: sample both continua on the eta-grid and
// take sorted nearest-neighbour sup-min distances.  Never consults the
// closed form.
double discretized_hausdorff(const CircleContinuum& c1, const CircleContinuum& c2,
                             double eta) {
  auto sample = [&](const CircleContinuum& c) {
    std::vector<double> pts;
    switch (c.kind()) {
      case ContinuumKind::kPoint:
        pts.push_back(c.a().coord());
        break;
      case ContinuumKind::kFullCircle: {
        int n = static_cast<int>(1.0 / eta);
        for (int i = 0; i < n; ++i) pts.push_back(static_cast<double>(i) / n);
        break;
      }
      case ContinuumKind::kArc: {
        int n = std::max(1, static_cast<int>(c.length() / eta));
        for (int i = 0; i <= n; ++i)
          pts.push_back(CirclePoint::normalize(c.a().coord() + c.length() * i / n));
        break;
      }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
  };
  auto dist_sorted = [](double x, const std::vector<double>& ys) {
    auto it = std::lower_bound(ys.begin(), ys.end(), x);
    double best = 1.0;
    auto consider = [&](std::size_t i) {
      double d = std::fabs(x - ys[i]);
      best = std::min(best, std::min(d, 1.0 - d));
    };
    if (it != ys.end()) consider(static_cast<std::size_t>(it - ys.begin()));
    if (it != ys.begin()) consider(static_cast<std::size_t>(it - ys.begin()) - 1);
    consider(0);
    consider(ys.size() - 1);
    return best;
  };
  auto s1 = sample(c1), s2 = sample(c2);
  double worst = 0.0;
  for (double x : s1) worst = std::max(worst, dist_sorted(x, s2));
  for (double x : s2) worst = std::max(worst, dist_sorted(x, s1));
  return worst;
}

}  // namespace

TEST_CASE("hausdorff_finite examples") {
  CircleSubset a({CirclePoint(0.0)});
  CircleSubset b({CirclePoint(0.5)});
  CHECK(hausdorff_finite_value(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hausdorff_finite_value(a, a) == 0.0);
  CircleSubset c({CirclePoint(0.0), CirclePoint(0.4)});
  CircleSubset d({CirclePoint(0.1)});
  CHECK(hausdorff_finite_value(c, d) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("subset canonicalization dedups across the wrap") {
  CircleSubset s({CirclePoint(1.0 - 1e-13), CirclePoint(0.0), CirclePoint(0.5)});
  CHECK(s.size() == 2);
}

TEST_CASE("hausdorff_continua examples") {
  auto full = CircleContinuum::full_circle();
  CHECK(hausdorff_continua_value(full, CircleContinuum::point(CirclePoint(0.3))) ==
        doctest::Approx(0.5).epsilon(1e-15));
  auto arc = CircleContinuum::arc(CirclePoint(0.0), CirclePoint(0.5));
  CHECK(hausdorff_continua_value(arc, arc) == 0.0);
  auto a1 = CircleContinuum::arc(CirclePoint(0.0), CirclePoint(0.6));
  auto a2 = CircleContinuum::arc(CirclePoint(0.1), CirclePoint(0.5));
  CHECK(hausdorff_continua_value(a1, a2) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::fabs(hausdorff_continua_value(a1, a2) -
                  discretized_hausdorff(a1, a2, 1e-4)) <= 2e-4);
}

TEST_CASE("closed form agrees with the discretization oracle") {
  Rng rng(101);
  for (int i = 0; i < 300; ++i) {
    auto c1 = random_continuum(rng);
    auto c2 = random_continuum(rng);
    double exact = hausdorff_continua_value(c1, c2);
    double approx = discretized_hausdorff(c1, c2, 1e-4);
    CHECK(std::fabs(exact - approx) <= 2e-4);
  }
}

TEST_CASE("metric axioms on random continua") {
  Rng rng(102);
  for (int i = 0; i < 2000; ++i) {
    auto c1 = random_continuum(rng);
    auto c2 = random_continuum(rng);
    auto c3 = random_continuum(rng);
    double d12 = hausdorff_continua_value(c1, c2);
    double d21 = hausdorff_continua_value(c2, c1);
    CHECK(d12 == d21);  // symmetry is exact by construction
    double d13 = hausdorff_continua_value(c1, c3);
    double d23 = hausdorff_continua_value(c2, c3);
    CHECK(d13 <= d12 + d23 + 1e-12);
    if (c1 == c2) CHECK(d12 == 0.0);
  }
}

TEST_CASE("identity of indiscernibles on canonical values") {
  Rng rng(103);
  for (int i = 0; i < 500; ++i) {
    auto c1 = random_continuum(rng);
    auto c2 = random_continuum(rng);
    if (hausdorff_continua_value(c1, c2) == 0.0) CHECK(c1 == c2);
  }
}

TEST_CASE("induced_2f_step basics") {
  CircleSubset fix({CirclePoint(0.0), CirclePoint(0.5)});
  CHECK(induced_2f_step(kMap, fix) == fix);
  CircleSubset one({CirclePoint(0.25)});
  CHECK(induced_2f_step(kMap, one).points()[0].coord() ==
        doctest::Approx(0.35).epsilon(1e-15));

  CircleSubset pair({CirclePoint(0.25), CirclePoint(0.75)});
  auto img = induced_2f_step(kMap, pair);
  CHECK(img.points()[0].coord() == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(img.points()[1].coord() == doctest::Approx(0.65).epsilon(1e-15));
  CircleSubset cur = pair;
  for (int i = 0; i < 200; ++i) cur = induced_2f_step(kMap, cur);
  CHECK(hausdorff_finite_value(cur, CircleSubset({CirclePoint(0.5)})) <= 1e-6);
}

TEST_CASE("cardinality never increases under 2^f") {
  Rng rng(104);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CirclePoint> pts;
    for (int i = 0; i < 12; ++i) pts.emplace_back(rng.uniform01());
    CircleSubset s(pts);
    CHECK(induced_2f_step(kMap, s).size() <= s.size());
  }
}

TEST_CASE("2^f Lipschitz bound on samples") {
  Rng rng(105);
  double lip = kMap.lipschitz();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CirclePoint> pa, pb;
    for (int i = 0; i < 5; ++i) pa.emplace_back(rng.uniform01());
    for (int i = 0; i < 5; ++i) pb.emplace_back(rng.uniform01());
    CircleSubset a(pa), b(pb);
    CHECK(hausdorff_finite_value(induced_2f_step(kMap, a), induced_2f_step(kMap, b)) <=
          lip * hausdorff_finite_value(a, b) + 1e-12);
  }
}

TEST_CASE("induced_Cf_step fixed structures and arc contraction") {
  CHECK(induced_Cf_step(kMap, CircleContinuum::full_circle()) ==
        CircleContinuum::full_circle());
  auto fp = CircleContinuum::point(CirclePoint(0.5));
  CHECK(induced_Cf_step(kMap, fp) == fp);

  auto arc = CircleContinuum::arc(CirclePoint(0.25), CirclePoint(0.75));
  auto cur = arc;
  for (int i = 0; i < 200; ++i) cur = induced_Cf_step(kMap, cur);
  CHECK(hausdorff_continua_value(cur, CircleContinuum::point(CirclePoint(0.5))) <=
        1e-6);
}

TEST_CASE("semigroup law is exact on representable values") {
  auto arc = CircleContinuum::arc(CirclePoint(0.1), CirclePoint(0.8));
  auto stepped = arc;
  const int n = 7;
  for (int i = 0; i < n; ++i) stepped = induced_Cf_step(kMap, stepped);
  // iterating endpoints through the same forward path gives bitwise equality
  CirclePoint ea = arc.a(), eb = arc.b();
  for (int i = 0; i < n; ++i) {
    ea = kMap.eval(ea);
    eb = kMap.eval(eb);
  }
  CHECK(stepped == CircleContinuum::arc(ea, eb));
}

TEST_CASE("neighborhood_contains") {
  CircleSubset a({CirclePoint(0.0)});
  CHECK(neighborhood_contains(a, 0.05, CirclePoint(0.0)));
  CHECK_FALSE(neighborhood_contains(a, 0.1, CirclePoint(0.2)));
  auto arc = CircleContinuum::arc(CirclePoint(0.0), CirclePoint(0.5));
  CHECK(neighborhood_contains(arc, 0.05, CirclePoint(0.53)));
  CHECK(neighborhood_contains(arc, 0.05, CirclePoint(0.25)));
  CHECK_FALSE(neighborhood_contains(arc, 0.02, CirclePoint(0.53)));
}
