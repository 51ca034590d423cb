#include "hyperlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "hyperlab/dendrite.hpp"
#include "hyperlab/entropy.hpp"
#include "hyperlab/recurrence.hpp"
#include "hyperlab/report.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/shadowing.hpp"
#include "hyperlab/sphere.hpp"
#include "hyperlab/symbolic.hpp"

namespace hyperlab {

using nlohmann::json;

MorseSmaleCircleMap map_from_json(const json& sys) {
  if (!sys.is_object() || sys.value("kind", "") != "circle_ms")
    throw std::invalid_argument("system: expected {\"kind\":\"circle_ms\",...}");
  int k = sys.at("k").get<int>();
  double amplitude = sys.at("amplitude").get<double>();
  std::string ori = sys.value("orientation", "preserving");
  if (ori != "preserving" && ori != "reversing")
    throw std::invalid_argument("orientation must be preserving|reversing");
  return MorseSmaleCircleMap(k, amplitude,
                             ori == "preserving" ? Orientation::kPreserving
                                                 : Orientation::kReversing);
}

namespace {

const json kDefaultSystem = {{"kind", "circle_ms"}, {"k", 1}, {"amplitude", 0.1},
                             {"orientation", "preserving"}};

double get_num(const json& p, const char* key, double def) {
  if (!p.contains(key)) return def;
  if (!p.at(key).is_number()) throw std::invalid_argument(std::string(key) + ": number expected");
  return p.at(key).get<double>();
}

int get_int(const json& p, const char* key, int def) {
  if (!p.contains(key)) return def;
  if (!p.at(key).is_number_integer())
    throw std::invalid_argument(std::string(key) + ": integer expected");
  return p.at(key).get<int>();
}

// ---- shared generators (seeded, pinned) ----

std::vector<std::vector<CirclePoint>> random_strand_orbit(const MorseSmaleCircleMap& m,
                                                          Rng& rng, int strands,
                                                          int window, double delta) {
  std::vector<std::vector<CirclePoint>> out;
  double lip = m.lipschitz();
  for (int j = 0; j < strands; ++j) {
    std::vector<CirclePoint> s(static_cast<std::size_t>(2 * window + 1));
    s[static_cast<std::size_t>(window)] = CirclePoint(rng.uniform01());
    for (int i = 1; i <= window; ++i) {
      CirclePoint nxt = m.eval(s[static_cast<std::size_t>(window + i - 1)]);
      s[static_cast<std::size_t>(window + i)] = CirclePoint(nxt.coord() + rng.uniform(-delta, delta));
      CirclePoint prv = m.invert(s[static_cast<std::size_t>(window - i + 1)]);
      s[static_cast<std::size_t>(window - i)] =
          CirclePoint(prv.coord() + rng.uniform(-delta / lip, delta / lip));
    }
    out.push_back(std::move(s));
  }
  return out;
}

CircleContinuum random_arc(Rng& rng) {
  for (;;) {
    CirclePoint a(rng.uniform01()), b(rng.uniform01());
    if (!(a == b)) return CircleContinuum::arc(a, b);
  }
}

// sorted-sample discretization oracle for circle continua (independent of
// the closed form)
double discretized_hausdorff_circle(const CircleContinuum& c1,
                                    const CircleContinuum& c2, double eta) {
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
  auto nearest = [](double x, const std::vector<double>& ys) {
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
  for (double x : s1) worst = std::max(worst, nearest(x, s2));
  for (double x : s2) worst = std::max(worst, nearest(x, s1));
  return worst;
}

std::vector<PlanePoint> canonical_semicircle_detour(int N) {
  double inner = std::ldexp(1.0, -N);
  PlanePoint c{(1.0 + inner) / 2.0, 0.0};
  double r = (1.0 - inner) / 2.0;
  std::vector<PlanePoint> detour;
  for (int i = 0; i <= 7; ++i) {
    double t = std::acos(-1.0) * i / 7.0;
    detour.push_back(c + r * PlanePoint{std::cos(t), std::sin(t)});
  }
  detour.front() = {1.0, 0.0};
  detour.back() = {inner, 0.0};
  return detour;
}

const std::vector<PlanePoint> kCanonicalBeta{{1.0, 0.0}, {1.0, 0.5}};

// ---- experiment bodies ----

struct Outputs {
  json report;
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  int exit_code = kExitOk;
};

Outputs exp_shadow_falsify(const MorseSmaleCircleMap& m, const json& p,
                           std::uint64_t seed) {
  double eps = get_num(p, "epsilon", 0.1);
  double delta = get_num(p, "delta", 0.01);
  int window = get_int(p, "window", 60);
  double grid = get_num(p, "grid", 1e-3);
  auto rep = falsify_Cf_shadowing(m, eps, delta, window, grid, true, seed);

  Outputs out;
  out.report = {{"mode", "falsify-cf"},
                {"epsilon", rep.epsilon},
                {"delta", rep.delta},
                {"window", window},
                {"grid", grid},
                {"candidates_tested", rep.candidates_tested},
                {"survivors", rep.survivors},
                {"worst_margin", rep.worst_margin},
                {"verdict", rep.verdict == FalsificationVerdict::kFalsified
                                ? "falsified"
                                : "inconclusive"},
                {"audit_samples", rep.audit_samples},
                {"audit_ok", rep.audit_ok}};
  CsvBuilder csv({"kind", "a", "b", "fail_index", "margin"});
  static const char* kKinds[] = {"point", "arc", "full"};
  for (const auto& f : rep.failures)
    csv.row({kKinds[f.kind], num_str(f.a), num_str(f.b), std::to_string(f.index),
             num_str(f.margin)});
  out.files.emplace_back("candidates.csv", csv.str());
  out.exit_code = rep.verdict == FalsificationVerdict::kFalsified && rep.audit_ok
                      ? kExitOk
                      : kExitInconclusive;
  return out;
}

Outputs exp_shadow_2f(const MorseSmaleCircleMap& m, const json& p, std::uint64_t seed) {
  int strands = get_int(p, "strands", 3);
  int window = get_int(p, "window", 50);
  double delta = get_num(p, "delta", 1e-3);
  double eps = get_num(p, "epsilon", 0.05);
  int trials = get_int(p, "trials", 20);
  double grid = get_num(p, "grid", 1e-4);

  Rng rng(seed);
  Outputs out;
  CsvBuilder csv({"trial", "strand", "start", "sup_distance", "success"});
  bool all_ok = true;
  double worst = 0.0, worst_gap = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto orbit = random_strand_orbit(m, rng, strands, window, delta);
    auto res = shadow_finite_2f(m, orbit, window, eps, grid);
    all_ok = all_ok && res.success && res.max_strand_gap <= delta;
    worst = std::max(worst, res.sup_distance);
    worst_gap = std::max(worst_gap, res.max_strand_gap);
    for (int j = 0; j < strands; ++j)
      csv.row({std::to_string(t), std::to_string(j),
               num_str(res.strands[static_cast<std::size_t>(j)].start.coord()),
               num_str(res.sup_distance), res.success ? "1" : "0"});
  }
  out.report = {{"mode", "shadow-2f"}, {"trials", trials},   {"strands", strands},
                {"window", window},    {"delta", delta},     {"epsilon", eps},
                {"grid", grid},        {"worst_sup", worst}, {"all_shadowed", all_ok},
                {"max_strand_gap", worst_gap}};
  out.files.emplace_back("strands.csv", csv.str());
  out.exit_code = all_ok ? kExitOk : kExitInconclusive;
  return out;
}

Outputs exp_shadow_verify(const MorseSmaleCircleMap& m, const json& p) {
  double delta = get_num(p, "delta", 0.01);
  int window = get_int(p, "window", 60);
  auto po = build_splice_pseudo_orbit(m, delta, window);
  auto chk = verify_pseudo_orbit(m, po);
  Outputs out;
  out.report = {{"mode", "verify"},
                {"delta", delta},
                {"window", window},
                {"ok", chk.ok},
                {"max_gap", chk.max_gap}};
  out.exit_code = chk.ok ? kExitOk : kExitInconclusive;
  return out;
}

Outputs exp_recurrence(const MorseSmaleCircleMap& m, const json& p,
                       const std::string& construction) {
  Outputs out;
  if (construction == "orbit-closure") {
    double x = get_num(p, "x", 0.25);
    int stride = get_int(p, "stride", 1);
    int trunc = get_int(p, "truncation", 50);
    auto oc = build_orbit_closure(m, CirclePoint(x), stride, trunc);
    json defects = json::array();
    CsvBuilder csv({"truncation", "defect"});
    for (int t = 10; t <= trunc; t += 10) {
      double d = build_orbit_closure(m, CirclePoint(x), stride, t).defect;
      defects.push_back({{"truncation", t}, {"defect", d}});
      csv.row({std::to_string(t), num_str(d)});
    }
    out.report = {{"construction", construction},
                  {"x", x},
                  {"stride", stride},
                  {"truncation", trunc},
                  {"points", oc.points.size()},
                  {"defect", oc.defect},
                  {"defect_table", defects}};
    out.files.emplace_back("defects.csv", csv.str());
  } else if (construction == "homoclinic") {
    double x = get_num(p, "x", 0.25);
    int window = get_int(p, "window", 200);
    auto rep = homoclinic_witness(m, CirclePoint(x), window);
    CsvBuilder csv({"j", "approach", "return_approach"});
    for (std::size_t j = 0; j < rep.approach.size(); ++j)
      csv.row({std::to_string(j + 1), num_str(rep.approach[j]),
               num_str(rep.return_approach[j])});
    out.report = {{"construction", construction},
                  {"x", x},
                  {"window", window},
                  {"eps_star", rep.eps_star},
                  {"eps_floor", rep.eps_floor},
                  {"forward_identity_ok", rep.forward_identity_ok},
                  {"final_approach", rep.approach.back()},
                  {"final_return", rep.return_approach.back()}};
    out.files.emplace_back("approximants.csv", csv.str());
    out.exit_code = rep.forward_identity_ok && rep.eps_star >= rep.eps_floor
                        ? kExitOk
                        : kExitInconclusive;
  } else if (construction == "fixed-continua") {
    auto family = enumerate_fixed_continua(m);
    CsvBuilder csv({"kind", "a", "b", "period"});
    json continua = json::array();
    for (const auto& pc : family) {
      const char* kind = pc.continuum.kind() == ContinuumKind::kPoint ? "point"
                         : pc.continuum.kind() == ContinuumKind::kArc ? "arc"
                                                                      : "full";
      csv.row({kind, num_str(pc.continuum.a().coord()), num_str(pc.continuum.b().coord()),
               std::to_string(pc.period)});
      continua.push_back({{"type", kind},
                          {"a", pc.continuum.a().coord()},
                          {"b", pc.continuum.b().coord()},
                          {"period", pc.period}});
    }
    out.report = {{"construction", construction},
                  {"count", family.size()},
                  {"continua", continua}};
    out.files.emplace_back("continua.csv", csv.str());
  } else if (construction == "wandering") {
    double a = get_num(p, "a", 0.25), b = get_num(p, "b", 0.6);
    double eps = get_num(p, "epsilon", 0.05);
    double grid = get_num(p, "grid", 1e-3);
    int window = get_int(p, "window", 100);
    auto cert = wandering_certificate(m, CircleContinuum::arc(CirclePoint(a), CirclePoint(b)),
                                      eps, grid, window);
    const char* status = cert.status == CertificateStatus::kCertified ? "certified"
                         : cert.status == CertificateStatus::kInconclusive
                             ? "inconclusive"
                             : "precondition_violation";
    out.report = {{"construction", construction},
                  {"a", a},
                  {"b", b},
                  {"epsilon", eps},
                  {"grid", grid},
                  {"window", window},
                  {"status", status},
                  {"eps_prime", cert.eps_prime},
                  {"grid_arcs_examined", cert.grid_arcs_examined},
                  {"neighbourhood_arcs", cert.neighbourhood_arcs},
                  {"min_return", cert.min_return_in_neighbourhood}};
    out.exit_code = cert.status == CertificateStatus::kCertified ? kExitOk
                    : cert.status == CertificateStatus::kInconclusive
                        ? kExitInconclusive
                        : kExitInvalidConfig;
  } else {
    throw std::invalid_argument("unknown recurrence construction");
  }
  return out;
}

Outputs exp_entropy(const json& sys, const json& p, std::uint64_t seed) {
  std::vector<double> eps_schedule;
  std::vector<int> n_schedule;
  for (const auto& e : p.value("eps_schedule", json::array({0.1, 0.05})))
    eps_schedule.push_back(e.get<double>());
  for (const auto& n : p.value("n_schedule", json::array({4, 6, 8, 10, 12})))
    n_schedule.push_back(n.get<int>());
  std::size_t budget = static_cast<std::size_t>(get_int(p, "budget", 250));

  SeparatedReport rep;
  std::string kind = sys.value("kind", "circle_ms");
  if (kind == "rotation") {
    rep = entropy_estimate(rigid_rotation_system(sys.value("alpha", 0.137)),
                           eps_schedule, n_schedule, budget, seed);
  } else if (kind == "cf_arcs") {
    rep = entropy_estimate(circle_arc_system(map_from_json(sys.value("map", kDefaultSystem))),
                           eps_schedule, n_schedule, budget, seed);
  } else {
    rep = entropy_estimate(circle_point_system(map_from_json(sys)), eps_schedule,
                           n_schedule, budget, seed);
  }

  Outputs out;
  CsvBuilder csv({"n", "epsilon", "count", "method", "estimate"});
  for (const auto& row : rep.rows)
    csv.row({std::to_string(row.n), num_str(row.eps), std::to_string(row.count),
             row.method, num_str(row.estimate)});
  out.report = {{"mode", "estimate"},
                {"system", kind},
                {"budget", budget},
                {"rows", rep.rows.size()},
                {"extrapolated_h", rep.extrapolated_h},
                {"partial", rep.partial}};
  out.files.emplace_back("separated.csv", csv.str());
  out.exit_code = rep.partial ? kExitInconclusive : kExitOk;
  return out;
}

Outputs exp_entropy_exact_family(const MorseSmaleCircleMap& m, const json& p) {
  int r = get_int(p, "r", 2);
  int n = get_int(p, "n", 3);
  auto fam = exact_separated_lower_bound_coding(m, r, n);
  double min_dn = verify_exact_family(m, fam);
  Outputs out;
  CsvBuilder csv({"n", "epsilon", "count", "method", "estimate"});
  csv.row({std::to_string(n), num_str(fam.delta), std::to_string(fam.subsets.size()),
           "exact", num_str(fam.estimate)});
  out.files.emplace_back("separated.csv", csv.str());
  out.report = {{"mode", "exact-family"},
                {"r", r},
                {"n", n},
                {"count", fam.subsets.size()},
                {"delta", fam.delta},
                {"min_spacing", fam.min_spacing},
                {"min_pairwise_dn", min_dn},
                {"estimate", fam.estimate},
                {"estimate_naive", fam.estimate_naive},
                {"separated", min_dn > fam.delta}};
  out.exit_code = min_dn > fam.delta ? kExitOk : kExitInconclusive;
  return out;
}

Outputs exp_coding(const MorseSmaleCircleMap& m, const json& p,
                   const std::string& construction, std::uint64_t seed) {
  int samples = get_int(p, "samples", 1000);
  int window = get_int(p, "window", 8);
  int r = get_int(p, "r", 2);
  Rng rng(seed);
  Outputs out;
  if (construction == "sq") {
    std::vector<std::pair<long, int>> pts;
    for (int i = 0; i < samples; ++i)
      pts.emplace_back(static_cast<long>(rng.below(2 * window + 1)) - window,
                       1 + static_cast<int>(rng.below(6)));
    auto rows = sq_nonwandering_evidence(get_int(p, "shift_window", 20), pts);
    std::size_t pass = 0;
    int validity = 0, equivariance = 0;
    for (const auto& row : rows) pass += row.pass ? 1 : 0;
    for (int i = 0; i < samples; ++i) {
      RealSeq s = sq_point(static_cast<long>(rng.below(9)) - 4, 1 + static_cast<int>(rng.below(5)));
      if (sq_valid(shift_step(s, +1)) && sq_valid(shift_step(s, -1))) ++validity;
    }
    // indicator-coding equivariance on random finite sets of points
    for (int t = 0; t < samples; ++t) {
      std::vector<RealSeq> A;
      for (int q = 1; q <= r + 2; ++q)
        if (rng.uniform01() < 0.6)
          A.push_back(sq_point(static_cast<long>(rng.below(2 * window - 1)) - (window - 1), q));
      if (A.empty()) A.push_back(sq_fixed_point());
      std::vector<RealSeq> shifted;
      for (const auto& x : A) shifted.push_back(shift_step(x, +1));
      auto lhs = phi_sq(shifted, r, window);
      auto rhs = shift_step(phi_sq(A, r, window), +1);
      bool ok = true;
      for (long n = -window; n <= window - 1; ++n) ok = ok && lhs.at(n) == rhs.at(n);
      equivariance += ok ? 1 : 0;
    }
    out.report = {{"construction", "sq"},
                  {"samples", samples},
                  {"return_pass", pass},
                  {"validity_pass", validity},
                  {"equivariance_pass", equivariance}};
    out.exit_code = pass == rows.size() && validity == samples && equivariance == samples
                        ? kExitOk
                        : kExitInconclusive;
  } else if (construction == "phi2f") {
    std::vector<CirclePoint> bases;
    auto fps = m.fixed_points();
    double lo = fps[0].point.coord();
    double len = CirclePoint::normalize(fps[1].point.coord() - lo);
    for (int k = 0; k < r; ++k)
      bases.emplace_back(lo + len * (0.3 + 0.3 * (k + 1.0) / (r + 1.0)));
    auto probe = coding_phi_finite(m, bases, CircleSubset({bases[0]}), window);
    int pass = 0;
    for (int t = 0; t < samples; ++t) {
      std::vector<CirclePoint> pts;
      for (int k = 0; k < r; ++k)
        for (int i = 0; i <= 2 * window; ++i)
          if (rng.uniform01() < 0.3)
            pts.push_back(probe.grid[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
      if (pts.empty()) pts.push_back(probe.grid[0][0]);
      CircleSubset A(pts);
      auto ca = coding_phi_finite(m, bases, A, window);
      auto cfa = coding_phi_finite(m, bases, induced_2f_step(m, A), window);
      bool ok = true;
      for (int k = 0; k < r; ++k)
        for (int i = 1; i <= 2 * window; ++i)
          ok = ok && cfa.bits[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] ==
                         ca.bits[static_cast<std::size_t>(k)][static_cast<std::size_t>(i - 1)];
      pass += ok ? 1 : 0;
    }
    out.report = {{"construction", "phi2f"}, {"samples", samples}, {"window", window},
                  {"r", r},                  {"pass", pass}};
    out.exit_code = pass == samples ? kExitOk : kExitInconclusive;
  } else if (construction == "finite-map") {
    std::vector<CirclePoint> seeds;
    for (int k = 0; k < r; ++k) seeds.emplace_back(0.2 + 0.1 * k / std::max(1, r - 1));
    auto coding = finite_map_coding(m, seeds, window);
    out.report = {{"construction", "finite-map"},
                  {"r", r},
                  {"window", window},
                  {"points_checked", coding.points_checked},
                  {"equivariance_ok", coding.equivariance_ok},
                  {"min_separation", coding.min_separation},
                  {"injective_on_strands", coding.injective_on_strands},
                  {"constant_off_strands", coding.constant_off_strands}};
    out.exit_code = coding.equivariance_ok && coding.injective_on_strands &&
                            coding.constant_off_strands
                        ? kExitOk
                        : kExitInconclusive;
  } else if (construction == "cone") {
    int pass = 0;
    for (int t = 0; t < samples; ++t) {
      ConeContinuum cone;
      for (long n = -window; n <= window; ++n)
        if (rng.uniform01() < 0.5) cone.set_height(n, rng.uniform01());
      bool ok = cone_phi(cone.stepped(+1)) == shift_step(cone_phi(cone), -1) &&
                cone_phi(cone.stepped(-1)) == shift_step(cone_phi(cone), +1);
      pass += ok ? 1 : 0;
    }
    out.report = {{"construction", "cone"}, {"samples", samples}, {"pass", pass}};
    out.exit_code = pass == samples ? kExitOk : kExitInconclusive;
  } else {
    throw std::invalid_argument("unknown coding construction");
  }
  return out;
}

Outputs exp_dendrite(const json& p, const std::string& mode, std::uint64_t seed) {
  Outputs out;
  if (mode == "csigma") {
    int k = get_int(p, "k", 2);
    int n = get_int(p, "n", 2);
    double delta = get_num(p, "delta", 0.0);
    auto cert = verify_C_sigma_separation(k, n, delta);
    out.report = {{"mode", "csigma"},
                  {"k", k},
                  {"n", n},
                  {"delta", cert.delta},
                  {"delta_star", cert.delta_star},
                  {"count", cert.count},
                  {"pairs", cert.pairs},
                  {"all_separated", cert.all_separated},
                  {"log_count_rate", cert.log_count_rate}};
    if (p.value("pairs_csv", false)) {
      // pairwise inverse-map d_n table over all addresses
      std::vector<std::vector<int>> sigmas;
      std::size_t count = cert.count;
      for (std::size_t id = 0; id < count; ++id) {
        std::vector<int> sigma(static_cast<std::size_t>(n));
        std::size_t v = id;
        for (int j = 0; j < n; ++j) {
          sigma[static_cast<std::size_t>(j)] = static_cast<int>(v % k) + 1;
          v /= static_cast<std::size_t>(k);
        }
        sigmas.push_back(sigma);
      }
      auto label = [](const std::vector<int>& s) {
        std::string out_s;
        for (int c : s) out_s += std::to_string(c);
        return out_s;
      };
      CsvBuilder csv({"sigma_i", "sigma_j", "dn"});
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
          Subtree si = build_C_sigma(k, n, sigmas[i]);
          Subtree sj = build_C_sigma(k, n, sigmas[j]);
          double dn = 0.0;
          for (int t = 0; t < n; ++t) {
            dn = std::max(dn, hausdorff_subtrees(si, sj));
            si = si.image(-1);
            sj = sj.image(-1);
          }
          csv.row({label(sigmas[i]), label(sigmas[j]), num_str(dn)});
        }
      out.files.emplace_back("pairs.csv", csv.str());
    }
    out.exit_code = cert.all_separated ? kExitOk : kExitInconclusive;
  } else if (mode == "fullcone" || mode == "conjugacy") {
    int r = get_int(p, "r", 2);
    long window = get_int(p, "window", 3);
    int samples = get_int(p, "samples", 1000);
    Rng rng(seed);
    double floor = fullcone_geometry_floor(r, window);
    int pass = 0, geom_pass = 0;
    for (int t = 0; t < samples; ++t) {
      FullConeCode a{r, {}}, b{r, {}};
      for (int i = 0; i < r; ++i)
        for (long n = -window; n <= window; ++n) {
          if (rng.uniform01() < 0.4) a.selected.insert({i, n});
          if (rng.uniform01() < 0.4) b.selected.insert({i, n});
        }
      bool ok = fullcone_decode(fullcone_phi(a)) == a &&
                fullcone_phi(fullcone_step(a, +1)) == shift_step(fullcone_phi(a), -1) &&
                fullcone_phi(fullcone_step(a, -1)) == shift_step(fullcone_phi(a), +1);
      pass += ok ? 1 : 0;
      if (a == b || hausdorff_subtrees(fullcone_geometry(a), fullcone_geometry(b)) >=
                        floor - 1e-12)
        ++geom_pass;
    }
    out.report = {{"mode", mode},        {"r", r},
                  {"window", window},    {"samples", samples},
                  {"conjugacy_pass", pass}, {"geometry_pass", geom_pass},
                  {"geometry_floor", floor}};
    out.exit_code = pass == samples && geom_pass == samples ? kExitOk : kExitInconclusive;
  } else {
    throw std::invalid_argument("unknown dendrite mode");
  }
  return out;
}

Outputs exp_sphere(const json& p, const std::string& mode) {
  Outputs out;
  if (mode == "periodic") {
    int N = get_int(p, "N", 2);
    int window = get_int(p, "window", 20);
    auto rep = build_periodic_continuum(N, {1.0, 0.0}, canonical_semicircle_detour(N),
                                        window);
    out.report = {{"mode", "periodic"},
                  {"N", N},
                  {"window", window},
                  {"defect", rep.defect},
                  {"period_check", rep.period_check}};
  } else if (mode == "homoclinic") {
    int window = get_int(p, "window", 40);
    auto rep = build_homoclinic_witness({1.0, 0.0}, kCanonicalBeta, window);
    CsvBuilder csv({"n", "approach_to_spine"});
    for (int n = -window; n <= window; ++n)
      csv.row({std::to_string(n),
               num_str(rep.approach_to_spine[static_cast<std::size_t>(n + window)])});
    out.report = {{"mode", "homoclinic"},
                  {"window", window},
                  {"eta_floor", rep.eta_floor},
                  {"final_approach", rep.approach_to_spine.back()},
                  {"final_approximant_gap", rep.approximant_gap.back()},
                  {"final_approximant_return", rep.approximant_return.back()}};
    out.files.emplace_back("approach.csv", csv.str());
  } else if (mode == "conjugacy") {
    int window = get_int(p, "window", 20);
    int mesh = get_int(p, "mesh", 12);
    auto rep = special_dendrite_conjugacy({1.0, 0.0}, kCanonicalBeta, window, mesh);
    json radii = json::array(), sink = json::array(), source = json::array(),
         joint = json::array();
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
      radii.push_back(rep.radii[i]);
      sink.push_back(rep.sink_modulus[i]);
      source.push_back(rep.source_modulus[i]);
      joint.push_back(rep.joint_modulus[i]);
    }
    out.report = {{"mode", "conjugacy"},      {"window", window},
                  {"mesh", mesh},             {"mesh_points", rep.mesh_points},
                  {"max_residual", rep.max_residual}, {"radii", radii},
                  {"sink_modulus", sink},     {"source_modulus", source},
                  {"joint_modulus", joint}};
  } else if (mode == "nonshadowing") {
    double eps = get_num(p, "epsilon", 0.2);
    double delta = get_num(p, "delta", 0.02);
    int window = get_int(p, "window", 50);
    double wedge = get_num(p, "wedge", 0.35);
    int scale = get_int(p, "scale", 10);
    auto rep = sphere_nonshadowing_certificate(eps, delta, window, wedge,
                                               static_cast<std::size_t>(scale), true);
    CsvBuilder csv({"family", "p1", "p2", "fail_index", "margin", "route"});
    for (const auto& f : rep.failures)
      csv.row({f.family, num_str(f.p1), num_str(f.p2), std::to_string(f.index),
               num_str(f.margin), std::to_string(f.route)});
    out.report = {{"mode", "nonshadowing"},
                  {"epsilon", eps},
                  {"delta", delta},
                  {"window", window},
                  {"wedge", wedge},
                  {"candidates_tested", rep.candidates_tested},
                  {"survivors", rep.survivors},
                  {"worst_margin", rep.worst_margin},
                  {"pseudo_orbit_max_gap", rep.pseudo_orbit_max_gap},
                  {"audit_samples", rep.audit_samples},
                  {"audit_ok", rep.audit_ok},
                  {"verdict", rep.verdict == SphereVerdict::kFalsified ? "falsified"
                                                                       : "inconclusive"}};
    out.files.emplace_back("candidates.csv", csv.str());
    out.exit_code = rep.verdict == SphereVerdict::kFalsified && rep.audit_ok
                        ? kExitOk
                        : kExitInconclusive;
  } else {
    throw std::invalid_argument("unknown sphere mode");
  }
  return out;
}

}  // namespace

std::vector<std::string> list_experiments() {
  return {"shadow.falsify-cf", "shadow.shadow-2f",    "shadow.verify",
          "recurrence.orbit-closure", "recurrence.homoclinic",
          "recurrence.fixed-continua", "recurrence.wandering",
          "entropy.estimate", "entropy.exact-family",
          "coding.sq",        "coding.phi2f",        "coding.finite-map",
          "coding.cone",      "dendrite.csigma",     "dendrite.fullcone",
          "dendrite.conjugacy", "sphere.periodic",   "sphere.homoclinic",
          "sphere.conjugacy", "sphere.nonshadowing"};
}

RunOutcome run_experiment(const json& config, const std::string& out_dir) {
  RunOutcome outcome;
  json effective = config;
  try {
    if (!config.is_object()) throw std::invalid_argument("config must be an object");
    std::string kind = config.at("experiment").get<std::string>();
    json sys = config.value("system", kDefaultSystem);
    json params = config.value("params", json::object());
    auto seed = static_cast<std::uint64_t>(config.value("seed", 20240));
    effective["system"] = sys;
    effective["params"] = params;
    effective["seed"] = seed;

    Outputs body;
    if (kind == "shadow.falsify-cf") {
      body = exp_shadow_falsify(map_from_json(sys), params, seed);
    } else if (kind == "shadow.shadow-2f") {
      body = exp_shadow_2f(map_from_json(sys), params, seed);
    } else if (kind == "shadow.verify") {
      body = exp_shadow_verify(map_from_json(sys), params);
    } else if (kind.rfind("recurrence.", 0) == 0) {
      body = exp_recurrence(map_from_json(sys), params, kind.substr(11));
    } else if (kind == "entropy.estimate") {
      body = exp_entropy(sys, params, seed);
    } else if (kind == "entropy.exact-family") {
      body = exp_entropy_exact_family(map_from_json(sys), params);
    } else if (kind.rfind("coding.", 0) == 0) {
      body = exp_coding(map_from_json(sys), params, kind.substr(7), seed);
    } else if (kind.rfind("dendrite.", 0) == 0) {
      body = exp_dendrite(params, kind.substr(9), seed);
    } else if (kind.rfind("sphere.", 0) == 0) {
      body = exp_sphere(params, kind.substr(7));
    } else {
      throw std::invalid_argument("unknown experiment: " + kind);
    }

    json report = body.report;
    report["experiment"] = kind;
    report["version"] = kVersion;
    report["config_hash"] = hash_hex(effective.dump());
    report["effective_config"] = effective;
    std::string stem = kind;
    std::replace(stem.begin(), stem.end(), '.', '_');
    std::string json_path = out_dir + "/" + stem + ".json";
    write_file_atomic(json_path, report.dump(2) + "\n");
    outcome.written.push_back(json_path);
    for (const auto& [name, content] : body.files) {
      std::string path = out_dir + "/" + stem + "_" + name;
      write_file_atomic(path, content);
      outcome.written.push_back(path);
    }
    outcome.report = report;
    outcome.exit_code = body.exit_code;
  } catch (const json::exception&) {
    outcome.exit_code = kExitInvalidConfig;
  } catch (const std::invalid_argument&) {
    outcome.exit_code = kExitInvalidConfig;
  } catch (const std::exception&) {
    outcome.exit_code = kExitInternal;
  }
  return outcome;
}

RunOutcome run_config_file(const std::string& path, const std::string& out_dir,
                           std::int64_t seed_override) {
  RunOutcome outcome;
  json config;
  try {
    config = json::parse(read_file(path));
  } catch (const std::exception&) {
    outcome.exit_code = kExitInvalidConfig;
    return outcome;
  }
  if (seed_override >= 0 && config.is_object()) config["seed"] = seed_override;
  return run_experiment(config, out_dir);
}

// ---------------------------------------------------------------------------
// acceptance criteria
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) { return num_str(v); }

CriterionResult c1_hausdorff_exactness(const std::string& out_dir) {
  CriterionResult res{1, "hausdorff-exactness", false, ""};
  Rng rng(101);
  auto random_continuum = [&]() {
    double roll = rng.uniform01();
    if (roll < 0.05) return CircleContinuum::point(CirclePoint(rng.uniform01()));
    if (roll < 0.10) return CircleContinuum::full_circle();
    return random_arc(rng);
  };
  double worst_gap = 0.0;
  CsvBuilder csv({"pair", "exact", "discretized", "difference"});
  for (int i = 0; i < 10000; ++i) {
    auto c1 = random_arc(rng), c2 = random_arc(rng);
    double exact = hausdorff_continua_value(c1, c2);
    double approx = discretized_hausdorff_circle(c1, c2, 1e-4);
    double gap = std::fabs(exact - approx);
    worst_gap = std::max(worst_gap, gap);
    if (i < 1000)
      csv.row({std::to_string(i), fmt(exact), fmt(approx), fmt(gap)});
  }
  bool axioms = true;
  double worst_triangle = 0.0;
  for (int i = 0; i < 10000; ++i) {
    auto a = random_continuum(), b = random_continuum(), c = random_continuum();
    double ab = hausdorff_continua_value(a, b);
    if (ab != hausdorff_continua_value(b, a)) axioms = false;
    double slack = hausdorff_continua_value(a, c) - ab - hausdorff_continua_value(b, c);
    worst_triangle = std::max(worst_triangle, slack);
    if ((a == b) != (ab == 0.0)) axioms = false;
  }
  axioms = axioms && worst_triangle <= 1e-12;
  write_file_atomic(out_dir + "/c1_pairs.csv", csv.str());
  res.pass = worst_gap <= 2e-4 && axioms;
  res.detail = "max |exact-discretized| = " + fmt(worst_gap) +
               ", triangle slack = " + fmt(worst_triangle);
  return res;
}

CriterionResult c2_cf_falsification(const std::string& out_dir) {
  CriterionResult res{2, "cf-shadowing-falsification", false, ""};
  json config = {{"experiment", "shadow.falsify-cf"},
                 {"system", kDefaultSystem},
                 {"params", {{"epsilon", 0.1}, {"delta", 0.01}, {"window", 60}, {"grid", 1e-3}}},
                 {"seed", 2024}};
  auto out = run_experiment(config, out_dir + "/c2");
  res.pass = out.exit_code == kExitOk &&
             out.report.value("verdict", "") == "falsified" &&
             out.report.value("audit_ok", false) &&
             out.report.value("audit_samples", 0ull) == 100ull &&
             out.report.value("candidates_tested", 0ull) >= 1000001ull;
  res.detail = "candidates = " + std::to_string(out.report.value("candidates_tested", 0ull)) +
               ", worst margin = " + fmt(out.report.value("worst_margin", 0.0)) +
               ", audit = " + (out.report.value("audit_ok", false) ? "ok" : "failed");
  return res;
}

CriterionResult c3_shadow_2f(const std::string& out_dir) {
  CriterionResult res{3, "induced-2f-shadowing", false, ""};
  json config = {{"experiment", "shadow.shadow-2f"},
                 {"system", kDefaultSystem},
                 {"params",
                  {{"strands", 3}, {"window", 50}, {"delta", 1e-3}, {"epsilon", 0.05},
                   {"trials", 20}, {"grid", 1e-4}}},
                 {"seed", 3031}};
  auto out = run_experiment(config, out_dir + "/c3");
  res.pass = out.exit_code == kExitOk && out.report.value("all_shadowed", false);
  res.detail = "worst sup distance = " + fmt(out.report.value("worst_sup", 1.0)) +
               " over 20 pseudo-orbits";
  return res;
}

CriterionResult c4_fixed_continua(const std::string& out_dir) {
  CriterionResult res{4, "fixed-continua-structure", false, ""};
  MorseSmaleCircleMap m1(1, 0.1), m2(2, 0.05);
  auto f1 = enumerate_fixed_continua(m1);
  auto f2 = enumerate_fixed_continua(m2);
  bool invariant = true;
  for (const auto& pc : f1)
    invariant = invariant &&
                hausdorff_continua_value(m1.image(pc.continuum), pc.continuum) == 0.0;
  for (const auto& pc : f2)
    invariant = invariant &&
                hausdorff_continua_value(m2.image(pc.continuum), pc.continuum) == 0.0;

  Rng rng(404);
  int certified = 0;
  const int kCandidates = 20;
  CsvBuilder csv({"candidate", "a", "b", "eps_prime", "status"});
  for (int i = 0; i < kCandidates; ++i) {
    // arcs with both endpoints well inside the open basin intervals
    double a = rng.uniform01() < 0.5 ? rng.uniform(0.05, 0.45) : rng.uniform(0.55, 0.95);
    double b = rng.uniform01() < 0.5 ? rng.uniform(0.05, 0.45) : rng.uniform(0.55, 0.95);
    if (std::fabs(a - b) < 0.02) b = CirclePoint::normalize(b + 0.05);
    auto cert = wandering_certificate(m1, CircleContinuum::arc(CirclePoint(a), CirclePoint(b)),
                                      0.05, 1e-3, 100);
    bool ok = cert.status == CertificateStatus::kCertified && cert.eps_prime > 0.0;
    certified += ok ? 1 : 0;
    csv.row({std::to_string(i), fmt(a), fmt(b), fmt(cert.eps_prime),
             ok ? "certified" : "failed"});
  }
  write_file_atomic(out_dir + "/c4_wandering.csv", csv.str());
  res.pass = f1.size() == 5 && f2.size() == 17 && invariant && certified == kCandidates;
  res.detail = "counts = " + std::to_string(f1.size()) + "/" + std::to_string(f2.size()) +
               ", invariance exact, wandering certificates = " +
               std::to_string(certified) + "/" + std::to_string(kCandidates);
  return res;
}

CriterionResult c5_entropy_dichotomy(const std::string& out_dir) {
  CriterionResult res{5, "entropy-dichotomy", false, ""};
  MorseSmaleCircleMap m(1, 0.1);
  auto sys = circle_arc_system(m);
  std::vector<CircleContinuum> samples = sys.sample(505, 250);
  bool poly_ok = true;
  CsvBuilder csv({"epsilon", "n", "count", "bound"});
  for (double eps : {0.1, 0.05}) {
    std::size_t c1 = greedy_separated(sys, samples, 1, eps).size();
    for (int n = 1; n <= 12; ++n) {
      std::size_t cn = greedy_separated(sys, samples, n, eps).size();
      std::size_t bound = c1 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
      poly_ok = poly_ok && cn <= bound;
      csv.row({fmt(eps), std::to_string(n), std::to_string(cn), std::to_string(bound)});
    }
  }
  write_file_atomic(out_dir + "/c5_arc_counts.csv", csv.str());
  auto rep = entropy_estimate(sys, {0.1, 0.05}, {4, 6, 8, 10, 12}, 250, 505);
  bool zero_ok = rep.extrapolated_h <= 0.05;

  bool exact_ok = true;
  double worst_slope_err = 0.0;
  for (int n = 1; n <= 3; ++n) {
    auto fam = exact_separated_lower_bound_coding(m, 2, n);
    double min_dn = verify_exact_family(m, fam);
    exact_ok = exact_ok && fam.subsets.size() == (1ull << (2 * n)) && min_dn > fam.delta;
    exact_ok = exact_ok && fam.estimate == 2 * std::log(2.0);
    worst_slope_err = std::max(worst_slope_err,
                               std::fabs(fam.estimate - fam.estimate_naive));
  }
  exact_ok = exact_ok && worst_slope_err <= 1e-12;

  res.pass = poly_ok && zero_ok && exact_ok;
  res.detail = "arc-system h = " + fmt(rep.extrapolated_h) +
               ", exact families 4^n verified, |estimate - 2 log 2| <= " +
               fmt(worst_slope_err);
  return res;
}

CriterionResult c6_csigma(const std::string& out_dir) {
  CriterionResult res{6, "inverse-separated-subtrees", false, ""};
  bool ok = true;
  std::string detail;
  CsvBuilder csv({"k", "n", "count", "delta", "delta_star", "rate_error"});
  for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
    auto cert = verify_C_sigma_separation(k, n);
    double rate_err = std::fabs(cert.log_count_rate - std::log(static_cast<double>(k)));
    std::size_t expect = 1;
    for (int i = 0; i < n; ++i) expect *= static_cast<std::size_t>(k);
    ok = ok && cert.all_separated && cert.count == expect && rate_err <= 1e-12 &&
         cert.delta_star >= 0.9 * std::min(1.0 / k, 0.5);
    csv.row({std::to_string(k), std::to_string(n), std::to_string(cert.count),
             fmt(cert.delta), fmt(cert.delta_star), fmt(rate_err)});
    detail += "(" + std::to_string(k) + "," + std::to_string(n) +
              "): delta* = " + fmt(cert.delta_star) + " ";
  }
  write_file_atomic(out_dir + "/c6_csigma.csv", csv.str());
  res.pass = ok;
  res.detail = detail;
  return res;
}

CriterionResult c7_coding_identities(const std::string& out_dir) {
  CriterionResult res{7, "coding-identities", false, ""};
  json base = {{"system", kDefaultSystem}, {"params", {{"samples", 1000}}}, {"seed", 707}};
  auto run = [&](const std::string& kind, json extra) {
    json config = base;
    config["experiment"] = kind;
    for (auto& [k, v] : extra.items()) config["params"][k] = v;
    return run_experiment(config, out_dir + "/c7");
  };
  auto phi2f = run("coding.phi2f", {{"window", 8}, {"r", 2}});
  auto sq = run("coding.sq", {{"window", 8}, {"shift_window", 20}});
  auto cone = run("coding.cone", {{"window", 6}});
  auto fullcone = run("dendrite.conjugacy", {{"r", 2}, {"window", 3}});
  auto fmap = run("coding.finite-map", {{"r", 3}, {"window", 30}});
  bool ok = phi2f.exit_code == kExitOk && sq.exit_code == kExitOk &&
            cone.exit_code == kExitOk && fullcone.exit_code == kExitOk &&
            fmap.exit_code == kExitOk;
  res.pass = ok;
  res.detail = "phi2f " + std::to_string(phi2f.report.value("pass", 0)) +
               "/1000, sq " + std::to_string(sq.report.value("return_pass", 0)) +
               "/1000, cone " + std::to_string(cone.report.value("pass", 0)) +
               "/1000, fullcone " + std::to_string(fullcone.report.value("conjugacy_pass", 0)) +
               "/1000, finite-map " +
               std::to_string(fmap.report.value("points_checked", 0));
  return res;
}

CriterionResult c8_sphere(const std::string& out_dir) {
  CriterionResult res{8, "sphere-constructions", false, ""};
  auto periodic = build_periodic_continuum(2, {1.0, 0.0}, canonical_semicircle_detour(2), 20);
  auto homoclinic = build_homoclinic_witness({1.0, 0.0}, kCanonicalBeta, 40);
  auto conj = special_dendrite_conjugacy({1.0, 0.0}, kCanonicalBeta, 20, 13);
  json config = {{"experiment", "sphere.nonshadowing"},
                 {"params",
                  {{"epsilon", 0.2}, {"delta", 0.02}, {"window", 50}, {"wedge", 0.35},
                   {"scale", 10}}},
                 {"seed", 808}};
  auto ns = run_experiment(config, out_dir + "/c8");

  bool homo_ok = homoclinic.approach_to_spine.front() <= 1e-4 &&
                 homoclinic.approach_to_spine.back() <= 1e-4 &&
                 homoclinic.approximant_gap.back() <= 1e-4 &&
                 homoclinic.approximant_return.back() <= 1e-4 &&
                 homoclinic.eta_floor >= 0.1;
  res.pass = periodic.defect <= 1e-5 && homo_ok && conj.mesh_points >= 1000 &&
             conj.max_residual <= 1e-9 && ns.exit_code == kExitOk &&
             ns.report.value("verdict", "") == "falsified";
  res.detail = "periodic defect = " + fmt(periodic.defect) +
               ", homoclinic floor = " + fmt(homoclinic.eta_floor) +
               ", conjugacy residual = " + fmt(conj.max_residual) + " on " +
               std::to_string(conj.mesh_points) + " mesh points, nonshadowing " +
               ns.report.value("verdict", "?");
  return res;
}

std::vector<std::string> csv_files_under(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      out.push_back(fs::relative(entry.path(), dir).string());
  std::sort(out.begin(), out.end());
  return out;
}

CriterionResult c9_determinism(const std::string& out_dir) {
  CriterionResult res{9, "determinism", false, ""};
  std::string pass1 = out_dir + "/c9_pass1";
  std::string pass2 = out_dir + "/c9_pass2";
  for (int i = 1; i <= 8; ++i) {
    run_criterion(i, pass1);
    run_criterion(i, pass2);
  }
  auto files1 = csv_files_under(pass1);
  auto files2 = csv_files_under(pass2);
  bool same = files1 == files2 && !files1.empty();
  std::size_t compared = 0;
  if (same)
    for (const auto& rel : files1) {
      if (read_file(pass1 + "/" + rel) != read_file(pass2 + "/" + rel)) {
        same = false;
        res.detail = "mismatch in " + rel;
        break;
      }
      ++compared;
    }
  res.pass = same;
  if (same)
    res.detail = std::to_string(compared) + " CSV files byte-identical across reruns";
  return res;
}

}  // namespace

CriterionResult run_criterion(int index, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  switch (index) {
    case 1: return c1_hausdorff_exactness(out_dir);
    case 2: return c2_cf_falsification(out_dir);
    case 3: return c3_shadow_2f(out_dir);
    case 4: return c4_fixed_continua(out_dir);
    case 5: return c5_entropy_dichotomy(out_dir);
    case 6: return c6_csigma(out_dir);
    case 7: return c7_coding_identities(out_dir);
    case 8: return c8_sphere(out_dir);
    case 9: return c9_determinism(out_dir);
    default: throw std::invalid_argument("criterion index must be 1..9");
  }
}

int reproduce_all(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  json summary = json::array();
  CsvBuilder csv({"criterion", "name", "pass", "detail"});
  bool all = true;
  for (int i = 1; i <= 9; ++i) {
    auto res = run_criterion(i, out_dir);
    all = all && res.pass;
    summary.push_back({{"criterion", res.index},
                       {"name", res.name},
                       {"pass", res.pass},
                       {"detail", res.detail}});
    csv.row({std::to_string(res.index), res.name, res.pass ? "1" : "0", res.detail});
  }
  write_file_atomic(out_dir + "/summary.json",
                    json({{"version", kVersion}, {"criteria", summary}}).dump(2) + "\n");
  write_file_atomic(out_dir + "/summary.csv", csv.str());
  return all ? 0 : 1;
}

}  // namespace hyperlab
