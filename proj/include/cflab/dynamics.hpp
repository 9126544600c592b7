#pragma once

// Depth-L tower model: cylinders are refined to level L and every point is
// located by (tower j, position p in F_L^j). T_g moves p to p + g; points that
// leave the tower are "escape" mass and widen the interval.

#include "cflab/chain.hpp"
#include "cflab/finite_rank.hpp"
#include "cflab/rank_one.hpp"

#include <optional>
#include <vector>

namespace cflab {

enum class EscapePolicy {
  charge,             // escaping mass is charged to hi
  wrap_if_certified,  // rank one over Z, certified spacer-free beyond depth: positions wrap mod h_L
};

// Per-tower counts at one level; the value is sum_j lambda^j * counts.
struct TowerCounts {
  std::size_t level = 0;
  std::vector<Int> lo, hi;
};

class TowerModel {
 public:
  TowerModel(const RankKSystem& sys, const InvariantMeasure& lambda, std::size_t depth,
             EscapePolicy policy = EscapePolicy::charge);

  std::size_t depth() const { return depth_; }
  bool wraps() const { return wrap_; }
  const std::vector<Int>& heights() const { return heights_; }
  const RankKSystem& system() const { return sys_; }
  const InvariantMeasure& lambda() const { return *lambda_; }

  TowerCounts cylinder_counts(const MarkedCylinder& a) const;
  // sum over g in window of the pair count behind mu(A cap T_g B)
  TowerCounts window_counts(const MarkedCylinder& a, const MarkedCylinder& b, const Box& window) const;

  CertifiedValue value(const TowerCounts& c) const;
  // Hull over the measure vertices of num / den.
  CertifiedValue ratio(const TowerCounts& num, const TowerCounts& den) const;

  CertifiedValue measure(const MarkedCylinder& a) const { return value(cylinder_counts(a)); }
  CertifiedValue window_sum(const MarkedCylinder& a, const MarkedCylinder& b, const Box& window) const {
    return value(window_counts(a, b, window));
  }
  // mu(A cap T_g B)
  CertifiedValue correlation(const MarkedCylinder& a, const MarkedCylinder& b, const GroupElement& g) const;

 private:
  RankKSystem sys_;
  const InvariantMeasure* lambda_;
  std::size_t depth_;
  Structure s_;
  bool wrap_ = false;
  std::vector<Int> heights_;
  std::vector<Box> frames_;
};

// True when stages beyond depth are certified to carry no spacers.
bool spacer_free_beyond(const RankKSystem& sys, std::size_t depth);

CertifiedValue correlation(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                           const MarkedCylinder& b, const GroupElement& g, std::size_t depth,
                           EscapePolicy policy = EscapePolicy::charge);
std::vector<CertifiedValue> correlation_table(const RankKSystem& sys, const InvariantMeasure& lambda,
                                              const MarkedCylinder& a, const MarkedCylinder& b,
                                              const std::vector<GroupElement>& shifts, std::size_t depth,
                                              EscapePolicy policy = EscapePolicy::charge);

struct CorrelationReport {
  std::size_t depth = 0;
  Box window;
  CertifiedValue mu_a, mu_b;
  CertifiedValue numerator, denominator, ratio;
  CertifiedValue target;  // mu(A) mu(B)
  std::optional<bool> denominator_identity;
  Int denominator_expected = 0;
};

// Window [0, h_l); A, B inside X_0 = [F_0]_0.
CorrelationReport wre_ratio_rank_one(const RankOneSystem& sys, const Cylinder& a, const Cylinder& b, std::size_t l,
                                     std::size_t depth, EscapePolicy policy = EscapePolicy::wrap_if_certified);
CorrelationReport wre_ratio_rank_k(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                                   const MarkedCylinder& b, std::size_t l, std::size_t depth,
                                   EscapePolicy policy = EscapePolicy::wrap_if_certified);

// sum_{g in window} mu(Y cap T_g Y) / mu(Y)^2
CertifiedValue a_n(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& y, const Box& window,
                   std::size_t depth, EscapePolicy policy = EscapePolicy::wrap_if_certified);

struct BoundCheck {
  CertifiedValue ratio;
  Rational bound;
  bool pass = false;
};
BoundCheck bound_check_rank_one(const RankOneSystem& sys, const Cylinder& a, const Cylinder& b, std::size_t l,
                                std::size_t depth, double tolerance = 1e-9);
// Bound 4k min(mu A, mu B) / min_j delta_j with delta_j from balanced_diagnostics at the depth.
BoundCheck bound_check_rank_k(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                              const MarkedCylinder& b, std::size_t l, std::size_t depth, double tolerance = 1e-9);

// Window F_n - F_n over Z^d.
CorrelationReport abelian_window_sums(const RankOneSystem& sys, const Cylinder& a, const Cylinder& b, std::size_t n,
                                      std::size_t depth);

// Cylinder [F_0]_0 of a rank-one system, and the check A subset of X_0.
Cylinder base_cylinder(const RankOneSystem& sys);
bool inside_base(const RankKSystem& sys, const MarkedCylinder& a);

InvariantMeasure rank_one_measure(const RankOneSystem& sys, std::size_t horizon);

}  // namespace cflab
