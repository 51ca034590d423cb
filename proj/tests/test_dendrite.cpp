#include "hyperlab/dendrite.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyperlab/rng.hpp"

using namespace hyperlab;

namespace {

DendritePoint random_point(Rng& rng) {
  if (rng.uniform01() < 0.5)
    return DendritePoint::spine(rng.uniform(-1.0, 1.0));
  long n = static_cast<long>(rng.below(13)) - 6;
  return DendritePoint::on_leg(n, rng.uniform01() * dendrite_leg_length(n));
}

Subtree random_subtree(Rng& rng) {
  double u = rng.uniform(-0.95, 0.9);
  double v = rng.uniform(u, 0.95);
  std::map<long, double> legs;
  for (long n = -6; n <= 6; ++n) {
    double a = dendrite_anchor(n);
    if (a < u || a > v) continue;
    if (rng.uniform01() < 0.4)
      legs[n] = rng.uniform(0.05, 1.0) * dendrite_leg_length(n);
  }
  return Subtree(u, v, std::move(legs));
}

// independent oracle: discretize both subtrees and take sup-min distances
double brute_hausdorff(const Subtree& a, const Subtree& b, double eta) {
  auto sample = [&](const Subtree& s) {
    std::vector<std::pair<double, double>> pts;
    int m = std::max(1, static_cast<int>((s.spine_hi() - s.spine_lo()) / eta));
    for (int i = 0; i <= m; ++i)
      pts.push_back({s.spine_lo() + (s.spine_hi() - s.spine_lo()) * i / m, 0.0});
    for (const auto& [n, h] : s.legs()) {
      int lm = std::max(1, static_cast<int>(h / eta));
      for (int i = 0; i <= lm; ++i)
        pts.push_back({dendrite_anchor(n), h * i / lm});
    }
    return pts;
  };
  auto pa = sample(a), pb = sample(b);
  auto directed = [](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = 1e300;
      for (const auto& q : to)
        best = std::min(best, std::hypot(p.first - q.first, p.second - q.second));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(pa, pb), directed(pb, pa));
}

}  // namespace

TEST_CASE("node layout") {
  CHECK(dendrite_anchor(0) == 0.0);
  CHECK(dendrite_anchor(1) == 0.5);
  CHECK(dendrite_anchor(-1) == -0.5);
  CHECK(dendrite_anchor(3) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(dendrite_leg_length(0) == 1.0);
  CHECK(dendrite_leg_length(-3) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("F fixes the spine ends and maps leg tips to leg tips") {
  CHECK(F_eval(DendritePoint::spine(-1.0)) == DendritePoint::spine(-1.0));
  CHECK(F_eval(DendritePoint::spine(1.0)) == DendritePoint::spine(1.0));
  CHECK(F_eval(DendritePoint::on_leg(0, 1.0)) == DendritePoint::on_leg(1, 0.5));
  CHECK(F_eval(DendritePoint::spine(0.0)) == DendritePoint::spine(0.5));
}

TEST_CASE("F round trips on random points") {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    DendritePoint p = random_point(rng);
    CHECK(dendrite_distance(F_inverse(F_eval(p)), p) <= 1e-12);
    CHECK(dendrite_distance(F_eval(F_inverse(p)), p) <= 1e-12);
  }
}

TEST_CASE("windowed dendrite maps onto the shifted window") {
  std::map<long, double> legs, legs_shifted;
  for (long n = -5; n <= 5; ++n) legs[n] = dendrite_leg_length(n);
  for (long n = -4; n <= 6; ++n) legs_shifted[n] = dendrite_leg_length(n);
  Subtree X(-1.0, 1.0, legs);
  CHECK(X.image(+1) == Subtree(-1.0, 1.0, legs_shifted));
}

TEST_CASE("subtree image matches pointwise evaluation") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    Subtree s = random_subtree(rng);
    Subtree img = s.image(+1);
    // forward samples of s land in the image, back samples of the image in s
    for (int i = 0; i < 50; ++i) {
      double x = rng.uniform(s.spine_lo(), s.spine_hi());
      CHECK(distance_to_subtree(F_eval(DendritePoint::spine(x)), img) <= 1e-12);
    }
    for (const auto& [n, h] : s.legs()) {
      DendritePoint tip = DendritePoint::on_leg(n, h);
      CHECK(distance_to_subtree(F_eval(tip), img) <= 1e-12);
      DendritePoint mid = DendritePoint::on_leg(n, 0.5 * h);
      CHECK(distance_to_subtree(F_eval(mid), img) <= 1e-12);
    }
    for (int i = 0; i < 50; ++i) {
      double x = rng.uniform(img.spine_lo(), img.spine_hi());
      CHECK(distance_to_subtree(F_inverse(DendritePoint::spine(x)), s) <= 1e-12);
    }
  }
}

TEST_CASE("C_sigma building block scaling") {
  Subtree stub(0.0, 0.0, {{0, 0.5}});
  Subtree img = stub.image(+1);
  CHECK(img.legs().at(1) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("hausdorff_subtrees hand values") {
  Subtree a(0.0, 0.0), b(0.5, 0.5);
  CHECK(hausdorff_subtrees(a, a) == 0.0);
  CHECK(hausdorff_subtrees(a, b) == doctest::Approx(0.5).epsilon(1e-15));

  Subtree half(-0.5, 0.5, {{0, 0.5}});
  Subtree full(-0.5, 0.5, {{0, 1.0}});
  CHECK(hausdorff_subtrees(half, full) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(hausdorff_subtrees(half, full) - brute_hausdorff(half, full, 3e-4)) <=
        6e-4);
}

TEST_CASE("hausdorff_subtrees agrees with the discretization oracle") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    Subtree a = random_subtree(rng), b = random_subtree(rng);
    double eta = 1e-3;
    CHECK(std::fabs(hausdorff_subtrees(a, b) - brute_hausdorff(a, b, eta)) <= 2 * eta);
  }
}

TEST_CASE("hausdorff_subtrees metric axioms") {
  Rng rng(34);
  for (int trial = 0; trial < 500; ++trial) {
    Subtree a = random_subtree(rng), b = random_subtree(rng), c = random_subtree(rng);
    double ab = hausdorff_subtrees(a, b);
    CHECK(ab == hausdorff_subtrees(b, a));
    CHECK(hausdorff_subtrees(a, c) <= ab + hausdorff_subtrees(b, c) + 1e-12);
    if (a == b) CHECK(ab == 0.0);
  }
}

TEST_CASE("build_C_sigma examples") {
  Subtree s1 = build_C_sigma(2, 1, {1});
  CHECK(s1.spine_lo() == 0.0);
  CHECK(s1.spine_hi() == 0.0);
  CHECK(s1.legs().at(0) == doctest::Approx(0.5).epsilon(1e-15));

  Subtree s2 = build_C_sigma(2, 2, {2, 1});
  CHECK(s2.legs().at(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s2.legs().at(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s2.spine_lo() == 0.0);
  CHECK(s2.spine_hi() == doctest::Approx(0.5).epsilon(1e-15));

  // one pullback realigns leg j to node j-1 with the coordinate height
  Subtree back = s2.image(-1);
  CHECK(back.legs().at(-1) == doctest::Approx(2.0 / 2.0 * 0.5).epsilon(1e-15));
  CHECK(back.legs().at(0) == doctest::Approx(1.0 / 2.0).epsilon(1e-15));
}

TEST_CASE("C_sigma separation certificates") {
  auto c22 = verify_C_sigma_separation(2, 2);
  CHECK(c22.count == 4);
  CHECK(c22.pairs == 6);
  CHECK(c22.all_separated);
  CHECK(c22.delta_star >= 0.25);
  CHECK(std::fabs(c22.log_count_rate - std::log(2.0)) <= 1e-12);

  auto c33 = verify_C_sigma_separation(3, 3);
  CHECK(c33.count == 27);
  CHECK(c33.pairs == 351);
  CHECK(c33.all_separated);
  CHECK(c33.delta_star >= 1.0 / 6.0);
  CHECK(std::fabs(c33.log_count_rate - std::log(3.0)) <= 1e-12);
}

TEST_CASE("full-cone step and coding") {
  FullConeCode empty{2, {}};
  CHECK(fullcone_phi(empty) == BitTupleSeq(BitTuple{0, 2}));
  CHECK(fullcone_step(empty, +1) == empty);

  FullConeCode one{2, {{1, 0}}};
  BitTupleSeq coded = fullcone_phi(one);
  BitTupleSeq expect(BitTuple{0, 2});
  expect.set(0, BitTuple{0b10, 2});
  CHECK(coded == expect);
  BitTupleSeq stepped = fullcone_phi(fullcone_step(one, +1));
  BitTupleSeq expect2(BitTuple{0, 2});
  expect2.set(1, BitTuple{0b10, 2});
  CHECK(stepped == expect2);
}

TEST_CASE("full-cone conjugacy and geometric separation") {
  Rng rng(35);
  const int r = 2;
  const long W = 3;
  double floor = fullcone_geometry_floor(r, W);
  CHECK(floor > 0.0);
  for (int trial = 0; trial < 1000; ++trial) {
    FullConeCode a{r, {}}, b{r, {}};
    for (int i = 0; i < r; ++i)
      for (long n = -W; n <= W; ++n) {
        if (rng.uniform01() < 0.4) a.selected.insert({i, n});
        if (rng.uniform01() < 0.4) b.selected.insert({i, n});
      }
    // phi is a bijection on window codes conjugating step to the shift
    CHECK(fullcone_decode(fullcone_phi(a)) == a);
    CHECK(fullcone_phi(fullcone_step(a, +1)) == shift_step(fullcone_phi(a), -1));
    CHECK(fullcone_phi(fullcone_step(a, -1)) == shift_step(fullcone_phi(a), +1));
    if (!(a == b)) {
      CHECK(hausdorff_subtrees(fullcone_geometry(a), fullcone_geometry(b)) >=
            floor - 1e-12);
    }
  }
}

TEST_CASE("decoded full cones stay connected subtrees") {
  // constructor enforces connectivity; exercising it across random codes
  Rng rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    FullConeCode c{3, {}};
    for (int i = 0; i < 3; ++i)
      for (long n = -3; n <= 3; ++n)
        if (rng.uniform01() < 0.3) c.selected.insert({i, n});
    Subtree g = fullcone_geometry(c);
    CHECK(g.spine_lo() == -1.0);
    CHECK(g.spine_hi() == 1.0);
  }
}

TEST_CASE("leg separation table is positive inside the window") {
  auto table = leg_separation_table(8);
  for (double gap : table) CHECK(gap > 0.0);
}
