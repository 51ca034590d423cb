#include "hyperlab/sphere.hpp"

#include <cmath>

#include "doctest.h"
#include "hyperlab/rng.hpp"

using namespace hyperlab;

namespace {

SpherePoint rnd_point(Rng& rng) {
  if (rng.uniform01() < 0.05) return SpherePoint::infinity();
  double r = std::exp(rng.uniform(-4.0, 4.0));
  double t = rng.uniform(0.0, 2.0 * std::acos(-1.0));
  return SpherePoint::finite({r * std::cos(t), r * std::sin(t)});
}

// dense-sampling oracle for the exact point-to-piece distance
double sampled_piece_distance(const SpherePoint& p, const SpherePiece& piece, int n) {
  double best = 1e300;
  for (int i = 0; i <= n; ++i) {
    PlanePoint z;
    if (piece.ray) {
      double t = static_cast<double>(i) / n;
      if (t >= 1.0) {
        best = std::min(best, chordal(p, SpherePoint::infinity()));
        continue;
      }
      z = piece.a + piece.b * (t / (1.0 - t) * (1.0 + std::abs(piece.a)));
    } else {
      z = piece.a + (piece.b - piece.a) * (static_cast<double>(i) / n);
    }
    best = std::min(best, chordal(p, SpherePoint::finite(z)));
  }
  return best;
}

}  // namespace

TEST_CASE("chordal metric landmarks") {
  SpherePoint zero = SpherePoint::finite({0.0, 0.0});
  SpherePoint inf = SpherePoint::infinity();
  CHECK(chordal(zero, inf) == 2.0);
  CHECK(chordal(inf, inf) == 0.0);
  CHECK(chordal(zero, SpherePoint::finite({1.0, 0.0})) ==
        doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("chordal metric axioms on random triples") {
  Rng rng(51);
  for (int i = 0; i < 3000; ++i) {
    SpherePoint a = rnd_point(rng), b = rnd_point(rng), c = rnd_point(rng);
    CHECK(chordal(a, b) == chordal(b, a));
    CHECK(chordal(a, c) <= chordal(a, b) + chordal(b, c) + 1e-12);
    CHECK(chordal(a, b) <= 2.0 + 1e-15);
  }
}

TEST_CASE("ns_map fixes the poles and halves coordinates") {
  CHECK(ns_map(SpherePoint::finite({0.0, 0.0}), +1).z == PlanePoint{0.0, 0.0});
  CHECK(ns_map(SpherePoint::infinity(), +1).infinite);
  SpherePoint x = SpherePoint::finite({1.0, 0.0});
  SpherePoint y = x;
  for (int i = 0; i < 10; ++i) y = ns_map(y, +1);
  CHECK(y.z == PlanePoint{std::ldexp(1.0, -10), 0.0});
  CHECK(chordal(y, SpherePoint::finite({0.0, 0.0})) <= std::ldexp(1.0, -9));
}

TEST_CASE("polyline images are vertex-wise and exact") {
  std::vector<PlanePoint> verts{{1.0, 0.0}, {0.75, 0.25}, {0.5, 0.0}};
  auto c = SphereContinuum::polyline(verts);
  auto img = ns_map(c, +1);
  REQUIRE(img.pieces().size() == 2);
  CHECK(img.pieces()[0].a == verts[0] * 0.5);
  CHECK(img.pieces()[0].b == verts[1] * 0.5);
  // sampled points of the image stay on the mapped pieces
  Rng rng(52);
  for (int i = 0; i < 1000; ++i) {
    double t = rng.uniform01();
    PlanePoint z = verts[0] + (verts[1] - verts[0]) * t;
    CHECK(point_to_continuum(SpherePoint::finite(z * 0.5), img) <= 1e-12);
  }
}

TEST_CASE("point_to_piece matches the sampling oracle") {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    SpherePoint p = rnd_point(rng);
    SpherePiece piece;
    if (rng.uniform01() < 0.3) {
      double t = rng.uniform(0.0, 2.0 * std::acos(-1.0));
      piece = {PlanePoint{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)},
               PlanePoint{std::cos(t), std::sin(t)}, true};
    } else {
      piece = {PlanePoint{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)},
               PlanePoint{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)}, false};
    }
    double exact = point_to_piece(embed(p), piece);
    double approx = sampled_piece_distance(p, piece, 4000);
    CHECK(exact <= approx + 1e-9);
    CHECK(approx <= exact + 2e-3);  // sampling density limit
  }
}

TEST_CASE("directed sup brackets a sampled oracle") {
  Rng rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PlanePoint> va, vb;
    for (int i = 0; i < 4; ++i) {
      va.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
      vb.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
    }
    auto A = SphereContinuum::polyline(va);
    auto B = SphereContinuum::polyline(vb);
    auto bracket = directed_hausdorff_sup(A, B, 1e-4);
    CHECK(bracket.lower <= bracket.upper);
    CHECK(bracket.upper - bracket.lower <= 1.1e-4);
    // sampled directed sup must sit inside the bracket, up to the oracle's
    // own chordal resolution (plane-uniform samples, spacing <= 6e-3)
    double sampled = 0.0;
    for (std::size_t s = 0; s + 1 < va.size(); ++s)
      for (int i = 0; i <= 2000; ++i) {
        PlanePoint z = va[s] + (va[s + 1] - va[s]) * (i / 2000.0);
        sampled = std::max(sampled, point_to_continuum(SpherePoint::finite(z), B));
      }
    CHECK(sampled <= bracket.upper + 1e-12);
    CHECK(sampled >= bracket.lower - 6e-3);
  }
}

TEST_CASE("fixed spine is exactly invariant and joins the poles") {
  auto P = build_fixed_spine({1.0, 0.0});
  CHECK(ns_map(P, +1) == P);
  CHECK(hausdorff_sphere(ns_map(P, +1), P, 1e-9).upper == 0.0);
  CHECK(point_to_continuum(SpherePoint::finite({0.0, 0.0}), P) == 0.0);
  CHECK(point_to_continuum(SpherePoint::infinity(), P) == 0.0);
  CHECK(point_to_continuum(SpherePoint::finite({7.0, 0.0}), P) <= 1e-15);
}

TEST_CASE("periodic continuum: straight detour reduces to the invariant ray") {
  auto rep = build_periodic_continuum(1, {1.0, 0.0}, {{1.0, 0.0}, {0.5, 0.0}}, 10);
  CHECK(rep.defect == 0.0);
}

TEST_CASE("periodic continuum with a semicircular detour") {
  // 8-vertex upper semicircle from x to x/4 avoiding f(x) and f^{-1}(x)
  std::vector<PlanePoint> detour;
  PlanePoint c{(1.0 + 0.25) / 2.0, 0.0};
  double r = (1.0 - 0.25) / 2.0;
  for (int i = 0; i <= 7; ++i) {
    double t = std::acos(-1.0) * i / 7.0;
    detour.push_back(c + r * PlanePoint{std::cos(t), std::sin(t)});
  }
  detour.front() = {1.0, 0.0};
  detour.back() = {0.25, 0.0};
  auto rep = build_periodic_continuum(2, {1.0, 0.0}, detour, 20);
  CHECK(rep.defect <= 1e-5);
  // triangle inequality with the chordal Lipschitz factor 2 of the model
  // map, plus the bracket resolution on both reported bounds
  CHECK(rep.period_check <= 3 * rep.defect + 2e-9);

  // defect shrinks as the window grows
  double prev = 1e300;
  for (int w : {5, 10, 20, 40}) {
    double d = build_periodic_continuum(2, {1.0, 0.0}, detour, w).defect;
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
}

TEST_CASE("periodic continuum rejects detours through forbidden points") {
  CHECK_THROWS_AS(
      build_periodic_continuum(2, {1.0, 0.0}, {{1.0, 0.0}, {0.5, 0.0}, {0.25, 0.0}}, 5),
      std::invalid_argument);
}

TEST_CASE("homoclinic witness tables") {
  std::vector<PlanePoint> beta{{1.0, 0.0}, {1.0, 0.5}};
  auto rep = build_homoclinic_witness({1.0, 0.0}, beta, 40);
  REQUIRE(rep.approach_to_spine.size() == 81);
  CHECK(rep.approach_to_spine.front() <= 1e-4);
  CHECK(rep.approach_to_spine.back() <= 1e-4);
  CHECK(rep.eta_floor >= 0.1);
  CHECK(rep.approximant_gap.back() <= 1e-4);
  CHECK(rep.approximant_return.back() <= 1e-4);
}

TEST_CASE("homoclinic witness rejects a beta crossing the spine") {
  std::vector<PlanePoint> bad{{1.0, 0.0}, {1.5, 0.5}, {2.0, -0.5}};
  CHECK_THROWS_AS(build_homoclinic_witness({1.0, 0.0}, bad, 10), std::invalid_argument);
}

TEST_CASE("special dendrite conjugacy residual and continuity tables") {
  std::vector<PlanePoint> beta{{1.0, 0.0}, {1.0, 0.5}};
  auto rep = special_dendrite_conjugacy({1.0, 0.0}, beta, 20, 12);
  CHECK(rep.mesh_points >= 900);
  CHECK(rep.max_residual <= 1e-9);
  REQUIRE(rep.radii.size() == 3);
  CHECK(rep.sink_modulus[0] >= rep.sink_modulus[1]);
  CHECK(rep.sink_modulus[1] >= rep.sink_modulus[2]);
  CHECK(rep.source_modulus[0] >= rep.source_modulus[2]);
  CHECK(rep.joint_modulus[2] <= rep.joint_modulus[0]);
  CHECK(rep.sink_modulus[2] < 0.5);  // images near the attracting end
}

TEST_CASE("nonshadowing certificate on a reduced family") {
  auto rep = sphere_nonshadowing_certificate(0.2, 0.02, 50, 0.35, 2, true, 17);
  CHECK(rep.verdict == SphereVerdict::kFalsified);
  CHECK(rep.survivors == 0);
  CHECK(rep.worst_margin > 0.0);
  CHECK(rep.pseudo_orbit_max_gap <= 0.02);
  CHECK(rep.audit_ok);
  CHECK(rep.candidates_tested > 500);
  // every family is represented among the failures
  bool saw_route1 = false, saw_route2 = false, saw_route0 = false;
  for (const auto& f : rep.failures) {
    if (f.route == 0) saw_route0 = true;
    if (f.route == 1) saw_route1 = true;
    if (f.route == 2) saw_route2 = true;
  }
  CHECK(saw_route0);
  CHECK(saw_route1);
  CHECK(saw_route2);
}
