#pragma once

#include "cflab/chain.hpp"
#include "cflab/rank_one.hpp"
#include "cflab/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cflab {

// Defined iff a.mark == c.source.
std::optional<MarkedElement> star_product(const MarkedElement& a, const Edge& c);
// (i,c,j) * (j,c',l) = (i, c+c', l)
std::optional<Edge> compose(const Edge& a, const Edge& b);

// Conditions (I), (II), (III) and (V); witnesses print marks 1-based.
ValidationReport validate_rank_k(const RankKSystem& sys);

using RMatrix = std::vector<std::vector<Int>>;  // r[i][j] = #C_n^{i,j}, source i, target j
RMatrix r_matrix(const RankKSystem& sys, std::size_t n);
RMatrix mat_mul(const RMatrix& a, const RMatrix& b);
RMatrix identity_matrix(std::size_t k);

// Level masses lambda_n^i for every invariant measure compatible with the
// prefix, normalized by mu(X_0) = normalization. Every such measure is a
// convex mix of the vertex measures, one per stage-M tower.
struct InvariantMeasure {
  std::size_t rank = 1;
  std::size_t horizon = 0;
  Rational normalization = 1;
  std::vector<std::vector<std::vector<Rational>>> vertex;  // vertex[n][v][i]
  std::vector<std::vector<CertifiedValue>> lambda;          // lambda[n][i] = hull over v
  double contraction_bound = 0;  // projective diameter bound for the lambda_0 cone
  double diameter = 0;           // exact projective diameter of the lambda_0 cone
  bool certified = false;
  std::string certificate;       // "certified" or "undecided"

  std::size_t vertices() const { return vertex.empty() ? 0 : vertex[0].size(); }
  // Hull over vertices of sum_i coeff[i] * lambda_level^i.
  CertifiedValue linear(std::size_t level, const std::vector<Int>& coeff) const;
  CertifiedValue linear(std::size_t level, const std::vector<Rational>& coeff) const;
  // Hull over vertices of the quotient of two linear forms.
  CertifiedValue ratio(std::size_t level_num, const std::vector<Rational>& num, std::size_t level_den,
                       const std::vector<Rational>& den) const;
};

InvariantMeasure solve_invariant_measure(const RankKSystem& sys, double tolerance = 1e-9,
                                         const Rational& normalization = 1);

// Birkhoff projective diameter and contraction tanh(diam/4) of a nonnegative
// matrix; infinite diameter when some entry is zero.
double projective_diameter(const RMatrix& m);
double birkhoff_contraction(const RMatrix& m);

MarkedCylinder refine_k(const RankKSystem& sys, const MarkedCylinder& cyl, std::size_t to_level);
std::vector<Int> cylinder_counts(const MarkedCylinder& cyl);
CertifiedValue cylinder_measure_k(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& cyl);

struct FinitenessTrend {
  std::vector<CertifiedValue> values;  // sum_i lambda_n^i #F_n^i
  Verdict verdict = Verdict::undecided;
  std::string reason;
};
FinitenessTrend check_finiteness_k(const RankKSystem& sys, const InvariantMeasure& lambda);

struct ActionRatioK {
  std::size_t n = 0, m = 0;
  CertifiedValue mass;       // sum_i #(A_{m,n}^i) lambda_m^i
  CertifiedValue reference;  // sum_i #(F_n^i) lambda_n^i
  CertifiedValue ratio;
};
std::vector<ActionRatioK> check_ae_action_k(const RankKSystem& sys, const InvariantMeasure& lambda,
                                            const GroupElement& g);

// Towers over Z with F_n^j = [0, h_n^j).
struct CastleTower {
  std::vector<Placement> placements;  // sorted by offset
  std::vector<Int> gaps;              // spacers above each placement (last entry: top)
  Int bottom = 0;                     // spacers below the first placement
};
struct CastleStage {
  std::size_t level = 0;  // stage n+1 built from stage n
  std::vector<Int> heights_below;
  std::vector<Int> heights;
  std::vector<CastleTower> towers;
};
struct CastleView {
  std::vector<std::vector<Int>> heights;  // heights[n][j]
  std::vector<CastleStage> stages;        // stages[n-1] describes C_n, n = 1..N
};
CastleView castle_view(const RankKSystem& sys);
bool no_spacers(const CastleStage& st);

struct SpacerTower {
  std::vector<Int> positions;         // base-copy positions in tower j at stage n
  std::vector<std::optional<Int>> roof;  // gap to the next copy; nullopt = extends past the tower
};
struct SpacerData {
  std::size_t level = 0;
  std::vector<SpacerTower> towers;
  std::string note;
};
SpacerData spacer_data(const RankKSystem& sys, std::size_t n);

struct BalancedReport {
  std::vector<std::vector<CertifiedValue>> delta;   // delta[n][j] = mu(X_0 cap [F_n^j]_n)
  std::vector<std::vector<CertifiedValue>> Lambda;  // Lambda[n][i] = lambda_n^i / sum_j lambda_n^j
  std::vector<std::vector<std::vector<Rational>>> column_ratios;  // [n][i][l] = r^{i,l} / sum_j r^{j,l}
  Rational threshold;
  CertifiedValue min_Lambda;  // over levels below the horizon
  bool balanced = false;
};
BalancedReport balanced_diagnostics(const RankKSystem& sys, const InvariantMeasure& lambda,
                                    const Rational& threshold = Rational(1, 20));

RankKSystem telescope_k(const RankKSystem& sys, const std::vector<std::size_t>& cuts);

}  // namespace cflab
