#pragma once

#include "cflab/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cflab {

enum class Condition { I, II, III, IV, V };
const char* to_string(Condition c);

struct ConditionResult {
  Condition condition;
  std::size_t level = 0;  // index of the C (or F) set the check is about
  bool pass = true;
  std::string witness;
};

struct ValidationReport {
  std::vector<ConditionResult> results;
  std::vector<std::string> notes;

  bool all_pass() const;
  const ConditionResult* first_failure() const;
  const ConditionResult* find(Condition c, std::size_t level) const;
};

ValidationReport validate(const RankOneSystem& sys);

Rational measure(const RankOneSystem& sys, const Cylinder& cyl);
Cylinder refine(const RankOneSystem& sys, const Cylinder& cyl, std::size_t to_level);
// Product #C_1 ... #C_n.
Int c_product(const RankOneSystem& sys, std::size_t n);

enum class Verdict { finite, infinite, undecided };
const char* to_string(Verdict v);

struct MeasureTrend {
  std::vector<Rational> values;  // #F_n / prod #C_i, n = 0..N
  Verdict verdict = Verdict::undecided;
  std::optional<Rational> limit;
  std::string reason;
};

// A user bound confirms finiteness when every value stays below it.
MeasureTrend total_measure_trend(const RankOneSystem& sys, const std::optional<Rational>& user_bound = std::nullopt);

// For each n: least m >= n with g + F_n + C_{n+1} + ... + C_m inside F_m.
std::vector<std::optional<std::size_t>> check_full_action(const RankOneSystem& sys, const GroupElement& g);

struct ActionRatio {
  std::size_t n = 0, m = 0;
  Rational ratio;
};
// Ratios #((g + F_n + C_{n+1} + ... + C_m) cap F_m) / (#F_n #C_{n+1} ... #C_m), m = n+1..N.
std::vector<ActionRatio> check_ae_action(const RankOneSystem& sys, const GroupElement& g, std::size_t n);
std::vector<ActionRatio> check_ae_action(const RankOneSystem& sys, const GroupElement& g);

struct Expansion {
  std::size_t level = 0;                       // j
  std::vector<GroupElement> c, d;              // digits for levels n+1..j
};

struct ExpansionResult {
  std::vector<Expansion> expansions;
  CertifiedValue value;  // mu([a]_n cap T_g^{-1} [b]_n)
  bool empty_product = false;
};

ExpansionResult return_expansions(const RankOneSystem& sys, const GroupElement& g, const GroupElement& a,
                                  const GroupElement& b, std::size_t n, std::size_t depth);

RankOneSystem telescope(const RankOneSystem& sys, const std::vector<std::size_t>& cuts);

struct ThinResult {
  RankOneSystem system;
  std::vector<Rational> densities;  // #C'_n / #C_n at index n (index 0 unused)
  std::vector<bool> meets_threshold;
  std::string note;
};

// Default threshold 1 - n^{-2}.
ThinResult thin(const RankOneSystem& sys, const std::vector<GroupElement>& generators,
                std::function<Rational(std::size_t)> threshold = {});

struct HolesResult {
  bool pass = true;
  std::optional<GroupElement> witness;
};
// (g + F_n + F_n - F_n - F_n) cap (C_{n+1} - C_{n+1}) has no nonzero element.
HolesResult large_holes_check(const RankOneSystem& sys, const GroupElement& g, std::size_t n);

// #{(c, c') in D x D : c - c' in F_n - F_n + h}, D = C_{l+1} + ... + C_L.
std::vector<Int> convolution_window_counts(const RankOneSystem& sys, std::size_t l, std::size_t n, std::size_t depth,
                                           const std::vector<GroupElement>& shifts);

struct CutStage {
  std::size_t cuts = 2;
  std::vector<Int> spacers;  // spacer levels stacked above copy i
  Int top = 0;               // extra spacers on top
};

RankOneSystem build_cut_and_stack(const std::vector<CutStage>& stages);
// Stage rule evaluated at (n, h_n); horizon stages are generated and the rule is kept for extension.
RankOneSystem build_cut_and_stack(std::size_t horizon, std::function<CutStage(std::size_t, const Int&)> rule);

}  // namespace cflab
