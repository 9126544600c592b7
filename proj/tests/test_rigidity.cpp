#include "cflab/catalog.hpp"
#include "cflab/rigidity.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace cflab;

namespace {

RankKSystem ordered(const std::string& name, std::vector<TowerRecipe> recipes, std::size_t horizon) {
  return stacked_system(name, recipes.size(), horizon, [recipes](std::size_t, const std::vector<Int>&) { return recipes; });
}

Int pow4(std::size_t n) { return Int(1) << static_cast<unsigned>(2 * n); }

}  // namespace

TEST_CASE("exactness of r2") {
  auto r = r2(6);
  auto e = exactness_check(r, solve_invariant_measure(r));
  CHECK(e.exact);
  for (std::size_t n = 0; n < 6; ++n) CHECK(e.min_tower_mass[n] == CertifiedValue::point(Rational(1, 2)));
  CHECK(e.delta == CertifiedValue::point(Rational(1, 2)));
}

TEST_CASE("quasi-exact parameters") {
  auto c = as_rank_k(chacon(10));
  auto qc = quasi_exact_params(c, solve_invariant_measure(c));
  CHECK(qc.R == 1);
  CHECK(qc.bounded);
  CHECK(qc.quasi_exact);
  CHECK_FALSE(exactness_check(c, solve_invariant_measure(c)).exact);

  auto h = as_rank_k(hk(10));
  auto qh = quasi_exact_params(h, solve_invariant_measure(h));
  CHECK_FALSE(qh.bounded);
  CHECK_FALSE(qh.quasi_exact);
  for (std::size_t n = 1; n < qh.stage_max_gap.size(); ++n) CHECK(qh.stage_max_gap[n] > qh.stage_max_gap[n - 1]);
}

TEST_CASE("consecutive-order condition") {
  CHECK(all_pass(co_condition(r2(5))));
  auto inter = ordered("interleaved", {{{0, 1, 0, 1}, {}}, {{1, 1, 0, 0}, {}}}, 4);
  auto checks = co_condition(inter);
  CHECK_FALSE(all_pass(checks));
  bool witness = false;
  for (const auto& c : checks) witness = witness || c.witness == "[1,2,1,2]";
  CHECK(witness);
}

TEST_CASE("relaxed order parameters") {
  auto c = co_relaxed_condition(as_rank_k(chacon(6)));
  CHECK(c.R == 1);
  CHECK(c.L == 0);
  auto r = co_relaxed_condition(r2(6));
  CHECK(r.R == 0);
  CHECK(r.L == 0);
  CHECK(r.bounded);
  auto inter = co_relaxed_condition(ordered("interleaved", {{{0, 1, 0, 1}, {}}, {{1, 1, 0, 0}, {}}}, 4));
  CHECK(inter.L == 1);
}

TEST_CASE("nondegeneracy") {
  CHECK(all_pass(nondegeneracy_check(r2(5))));
  auto one = ordered("single-entry", {{{0, 0, 0, 1}, {}}, {{1, 1, 0, 0}, {}}}, 3);
  auto checks = nondegeneracy_check(one);
  CHECK_FALSE(all_pass(checks));
  bool found = false;
  for (const auto& c : checks) found = found || (!c.pass && c.source == 1 && c.target == 0 && c.value == 1);
  CHECK(found);
}

TEST_CASE("rigidity times on r2 are the common heights") {
  auto r = r2(10);
  auto lam = solve_invariant_measure(r);
  auto o = oracle::stacked({{0, 0, 1, 1}, {1, 1, 0, 0}}, 8);
  for (std::size_t n = 1; n <= 6; ++n) {
    auto f = find_rigidity_time(r, lam, n, n + 2);
    CHECK(f.time == pow4(n));
    CHECK(f.ratio.lo >= Rational(1, 2));
    CHECK(f.guarantee == Rational(1, 4));
    CHECK(f.guarantee_met);
    // brute-force count at the same depth, charged escape
    long hits = 0, out = 0, size = 0;
    for (int j = 0; j < 2; ++j) {
      auto S = oracle::positions_k(o, f.tower, 0, n, j, n + 2);
      auto [h, e] = oracle::return_pairs(S, f.time.get_si(), o.h[n + 2][j]);
      hits += h, out += e, size += static_cast<long>(S.size());
    }
    CHECK(f.ratio.lo == Rational(hits, size));
  }
}

TEST_CASE("rigidity on the odometer is full") {
  auto o = as_rank_k(odometer(12));
  auto lam = solve_invariant_measure(o);
  for (std::size_t n = 1; n <= 8; ++n) {
    auto f = find_rigidity_time(o, lam, n, n + 3);
    CHECK(f.time == Int(1) << static_cast<unsigned>(n));
    CHECK(f.ratio == CertifiedValue::point(1));
  }
}

TEST_CASE("rigidity on chacon scans the spacer offsets") {
  auto c = as_rank_k(chacon(10));
  auto lam = solve_invariant_measure(c);
  auto f = find_rigidity_time(c, lam, 3, 7);
  auto o = oracle::chacon(7);
  CHECK(f.scan_offset <= 2);
  CHECK(f.time == o.h[3] + f.scan_offset.get_si());
  auto S = oracle::positions(o, {0}, 3, 7);
  auto best = oracle::return_pairs(S, f.time.get_si(), o.h[7]).first;
  CHECK(f.ratio.lo == Rational(best, static_cast<long>(S.size())));
  // the scan keeps the best of the three offsets
  for (long extra = 0; extra <= 2; ++extra) CHECK(oracle::return_pairs(S, o.h[3] + extra, o.h[7]).first <= best);
}

TEST_CASE("order-condition rigidity times and partial rigidity") {
  auto r = r2(10);
  auto lam = solve_invariant_measure(r);
  auto fs = co_rigidity_times(r, lam, 1, 5, 8);
  std::vector<Int> times;
  for (const auto& f : fs) {
    CHECK(f.time == pow4(f.stage));
    CHECK(f.min_ratio.lo >= Rational(1, 2) - Rational(1, 1000000));
    times.push_back(f.time);
  }
  auto good = partial_rigidity_estimate(r, lam, times, 1, 8);
  CHECK(good.eta >= Rational(1, 4));
  std::vector<Int> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  auto bad = partial_rigidity_estimate(r, lam, primes, 1, 8);
  CHECK(bad.eta < Rational(1, 20));
  CHECK_THROWS_AS(co_rigidity_times(ordered("interleaved", {{{0, 1, 0, 1}, {}}, {{1, 1, 0, 0}, {}}}, 6),
                                    solve_invariant_measure(r2(6)), 1, 3, 5),
                  Error);
}
