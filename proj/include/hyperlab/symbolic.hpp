#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hyperlab/circle.hpp"

namespace hyperlab {

/// Bi-infinite sequence equal to a default symbol outside a finite set of
/// indices.  Exceptions never store the default, so equality is exact.
template <class Sym>
class FiniteSupportSequence {
 public:
  FiniteSupportSequence() = default;
  explicit FiniteSupportSequence(Sym default_symbol)
      : default_(std::move(default_symbol)) {}

  const Sym& default_symbol() const { return default_; }
  const std::map<long, Sym>& exceptions() const { return ex_; }

  Sym at(long n) const {
    auto it = ex_.find(n);
    return it == ex_.end() ? default_ : it->second;
  }

  void set(long n, Sym value) {
    if (value == default_)
      ex_.erase(n);
    else
      ex_[n] = std::move(value);
  }

  /// new[n] = old[n + direction].
  FiniteSupportSequence shifted(int direction) const {
    FiniteSupportSequence out(default_);
    for (const auto& [n, v] : ex_) out.ex_.emplace(n - direction, v);
    return out;
  }

  /// One-sided shift: new[n] = old[n+1] for n >= 0, content at negative
  /// indices discarded.
  FiniteSupportSequence shifted_one_sided() const {
    FiniteSupportSequence out(default_);
    for (const auto& [n, v] : ex_)
      if (n >= 1) out.ex_.emplace(n - 1, v);
    return out;
  }

  friend bool operator==(const FiniteSupportSequence&,
                         const FiniteSupportSequence&) = default;

 private:
  Sym default_ = Sym{};
  std::map<long, Sym> ex_;
};

using RealSeq = FiniteSupportSequence<double>;

template <class Sym>
FiniteSupportSequence<Sym> shift_step(const FiniteSupportSequence<Sym>& s,
                                      int direction) {
  return s.shifted(direction);
}

/// D(s,t) = sum |s_n - t_n| / 2^|n|, an exact finite sum on shared-default
/// sequences.  Throws when the defaults differ.
double hilbert_metric_D(const RealSeq& s, const RealSeq& t);

/// S_Q points: sequences over {0} u {1/p} where each symbol 1/p occurs at
/// most once; `a` is the all-zero fixed point, b_n^p carries 1/p at index n.
RealSeq sq_fixed_point();
RealSeq sq_point(long n, int p);
bool sq_valid(const RealSeq& s);

struct SqReturnRow {
  long n = 0;
  int p = 0;
  double min_return = 0.0;   // min over 1 <= k <= N of D(shift^k x, x)
  double analytic_floor = 0.0;  // (1/p) * 2^{-|n|}
  bool pass = false;
};

/// Evidence that no point except `a` returns to itself under the shift.
std::vector<SqReturnRow> sq_nonwandering_evidence(int window,
                                                  const std::vector<std::pair<long, int>>& samples);

/// Binary r-tuple symbol for {0,1}^r-valued sequences.
struct BitTuple {
  std::uint32_t bits = 0;
  int r = 0;
  friend bool operator==(const BitTuple&, const BitTuple&) = default;
};

using BitTupleSeq = FiniteSupportSequence<BitTuple>;

/// Indicator coding of a finite set of S_Q points: component i of the tuple
/// at index n records whether b_n^{i+1} belongs to A.
BitTupleSeq phi_sq(const std::vector<RealSeq>& A, int r, int window);

/// Explicit preimage of a window-supported {0,1}^r sequence under phi_sq.
std::vector<RealSeq> phi_sq_preimage(const BitTupleSeq& target);

/// Semiconjugacy table for the coding of r backward orbit strands on the
/// circle: strand point f^{-n}(a_i) codes to b_n^{i+1} (one-sided shift),
/// everything else to `a`.
struct FiniteMapCoding {
  int r = 0;
  int window = 0;
  std::vector<std::vector<CirclePoint>> orbit;  // [strand][m + window]
  bool equivariance_ok = false;
  int points_checked = 0;
  double min_separation = 0.0;  // over the coding-relevant point set
  bool injective_on_strands = false;
  bool constant_off_strands = false;
  RealSeq phi(int strand, int offset) const;  // offset in [-window, window]
};

FiniteMapCoding finite_map_coding(const MorseSmaleCircleMap& m,
                                  const std::vector<CirclePoint>& seeds, int window);

/// Cone continuum over the single-spoke subshift: spoke n carries the stem
/// [h_n, 1] with default height 1 (apex only); the apex is always present.
class ConeContinuum {
 public:
  ConeContinuum() = default;

  double height(long n) const {
    auto it = h_.find(n);
    return it == h_.end() ? 1.0 : it->second;
  }
  void set_height(long n, double h);
  const std::map<long, double>& stems() const { return h_; }

  /// Base shift with heights carried: spoke n moves to n + direction.
  ConeContinuum stepped(int direction) const;

  friend bool operator==(const ConeContinuum&, const ConeContinuum&) = default;

 private:
  std::map<long, double> h_;  // spokes with h < 1
};

/// t_n = 1 - h_n, as a finite-support real sequence with default 0.
RealSeq cone_phi(const ConeContinuum& cone);

}  // namespace hyperlab
