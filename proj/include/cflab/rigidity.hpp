#pragma once

#include "cflab/dynamics.hpp"
#include "cflab/finite_rank.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cflab {

struct ExactnessReport {
  std::vector<bool> no_spacers;               // index n-1 for stage n
  std::vector<CertifiedValue> min_tower_mass;  // min_j mu(W_n^j), n = 0..N
  CertifiedValue delta;                        // min over n
  Rational threshold;
  bool exact = false;
};
ExactnessReport exactness_check(const RankKSystem& sys, const InvariantMeasure& lambda,
                                const Rational& threshold = Rational(1, 1000));

// Bounded-run verdicts compare the largest run in the later half of the
// stages with the earlier half: a run that keeps growing is not bounded.
struct QuasiExactReport {
  Int R = 0;
  std::vector<Int> stage_max_gap;  // index n-1 for stage n
  CertifiedValue delta;
  Rational threshold;
  bool bounded = false;
  bool quasi_exact = false;
};
QuasiExactReport quasi_exact_params(const RankKSystem& sys, const InvariantMeasure& lambda,
                                    const Rational& threshold = Rational(1, 1000));

struct OrderCheck {
  std::size_t level = 0;
  std::size_t tower = 0;
  bool pass = true;
  std::string witness;  // 1-based order listing on failure
};
std::vector<OrderCheck> co_condition(const RankKSystem& sys);
bool all_pass(const std::vector<OrderCheck>& checks);

struct RelaxedOrderReport {
  Int R = 0;           // longest spacer run
  std::size_t L = 0;   // most foreign copies between consecutive copies of one tower
  std::vector<Int> stage_R;
  std::vector<std::size_t> stage_L;
  bool bounded = false;
};
RelaxedOrderReport co_relaxed_condition(const RankKSystem& sys);

struct EntryCheck {
  std::size_t level = 0, source = 0, target = 0;
  Int value = 0;
  bool pass = true;
};
std::vector<EntryCheck> nondegeneracy_check(const RankKSystem& sys);
bool all_pass(const std::vector<EntryCheck>& checks);

struct RigidityFinding {
  std::size_t stage = 0;
  Int time = 0;
  int tower = 0;                // j_a
  CertifiedValue ratio;         // mu(T_m B cap B) / mu(B), B = base of tower j_a at the stage
  std::vector<int> chain;       // j_0..j_b
  std::vector<Int> steps;       // shift used after j_t
  std::size_t a = 0, b = 0;
  Int scan_offset = 0;          // extra shift picked by the spacer scan
  Rational guarantee;           // k^-k
  bool guarantee_met = false;
};

struct RigidityOptions {
  std::vector<int> tie_order;  // tower preference for argmax ties; empty = by index
  EscapePolicy policy = EscapePolicy::wrap_if_certified;
};

RigidityFinding find_rigidity_time(const RankKSystem& sys, const InvariantMeasure& lambda, std::size_t n,
                                   std::size_t depth, const RigidityOptions& opt = {});

struct CoRigidityFinding {
  std::size_t stage = 0;
  int heavy_tower = 0;
  CertifiedValue heavy_mass;
  Int time = 0;
  std::vector<CertifiedValue> ratios;  // one per level of the castle, tower by tower
  CertifiedValue min_ratio;
};
std::vector<CoRigidityFinding> co_rigidity_times(const RankKSystem& sys, const InvariantMeasure& lambda,
                                                 std::size_t castle_level, std::size_t last_stage,
                                                 std::size_t depth);

struct PartialRigidityEstimate {
  Rational eta;
  std::vector<std::vector<CertifiedValue>> table;  // [level J][time]
  std::vector<std::pair<int, Int>> levels;         // (tower, position) per row
};
PartialRigidityEstimate partial_rigidity_estimate(const RankKSystem& sys, const InvariantMeasure& lambda,
                                                  const std::vector<Int>& times, std::size_t castle_level,
                                                  std::size_t depth,
                                                  EscapePolicy policy = EscapePolicy::wrap_if_certified);

}  // namespace cflab
