#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperlab/hyperspace.hpp"

namespace hyperlab {

/// Bi-infinite pseudo-orbit truncated to indices [-window, window].
template <class State>
struct PseudoOrbit {
  int window = 0;
  double gap = 0.0;                // the declared delta
  std::vector<State> states;       // size 2*window + 1

  const State& at(int i) const { return states[static_cast<std::size_t>(i + window)]; }
  State& at(int i) { return states[static_cast<std::size_t>(i + window)]; }
};

struct PseudoOrbitCheck {
  bool ok = false;
  double max_gap = 0.0;
};

/// True iff all consecutive gaps d_H(step(x_i), x_{i+1}) are <= delta.
PseudoOrbitCheck verify_pseudo_orbit(const MorseSmaleCircleMap& m,
                                     const PseudoOrbit<CircleContinuum>& po);

/// Splice pseudo-orbit through the full circle: x_0 = S^1, x_1 an arc that
/// deletes a delta-collar around the repeller, x_{-1} symmetric around the
/// attractor; true orbits of C(f) elsewhere.  Gaps are nonzero only at
/// indices -1 and 0 and are <= delta by the collar choice.
PseudoOrbit<CircleContinuum> build_splice_pseudo_orbit(const MorseSmaleCircleMap& m,
                                                         double delta, int window);

enum class FalsificationVerdict { kFalsified, kInconclusive };

struct CandidateFailure {
  std::uint32_t kind = 0;  // 0 point, 1 arc, 2 full circle
  double a = 0.0, b = 0.0;
  int index = 0;        // failing index in [-window, window]
  double margin = 0.0;  // d_H at that index minus epsilon
};

struct FalsificationReport {
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t candidates_tested = 0;
  /// Smallest certified failure margin across candidates; > 0 iff every
  /// candidate fails at some index inside the window.
  double worst_margin = 0.0;
  FalsificationVerdict verdict = FalsificationVerdict::kInconclusive;
  std::uint64_t survivors = 0;
  std::vector<CandidateFailure> failures;  // per-candidate record (optional)
  bool keep_failures = false;
  std::uint64_t audit_samples = 0;
  bool audit_ok = true;
};

/// Sweeps the complete representable candidate family (grid points, grid
/// arcs, full circle) against the splice pseudo-orbit and certifies that no
/// candidate epsilon-shadows it inside the window.
FalsificationReport falsify_Cf_shadowing(const MorseSmaleCircleMap& m, double epsilon,
                                         double delta, int window, double grid_eta,
                                         bool keep_failures = false,
                                         std::uint64_t audit_seed = 2024);

/// One strand of a labeled finite-set pseudo-orbit.
struct StrandShadow {
  CirclePoint start;        // shadowing orbit seed z
  double sup_distance = 0.0;  // sup_i d(f^i(z), x_i)
};

struct Shadow2fResult {
  bool success = false;  // sup <= epsilon
  CircleSubset shadow;   // union of strand seeds
  double sup_distance = 0.0;  // sup_i d_H((2^f)^i(A), X_i), re-evaluated
  double max_strand_gap = 0.0;  // verified pseudo-orbit gap of the input
  std::vector<StrandShadow> strands;
};

/// Shadows each strand independently by grid search over initial points and
/// re-evaluates the induced-map sup distance on the union.
Shadow2fResult shadow_finite_2f(const MorseSmaleCircleMap& m,
                                const std::vector<std::vector<CirclePoint>>& strands,
                                int window, double epsilon,
                                double search_eta = 1e-4);

/// Greedy nearest-neighbour strand decomposition for unlabeled finite-set
/// pseudo-orbits; empty when the matching is inconsistent.
std::optional<std::vector<std::vector<CirclePoint>>> decompose_strands(
    const std::vector<CircleSubset>& states);

}  // namespace hyperlab
