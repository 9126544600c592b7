#include "cflab/catalog.hpp"
#include "cflab/dynamics.hpp"
#include "cflab/finite_rank.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace cflab;

namespace {

GroupElement s(long v) { return GroupElement::scalar(v); }

Rational pow4inv(std::size_t n) { return Rational(1, Int(1) << static_cast<unsigned>(2 * n)); }

RankKSystem growing(std::size_t horizon) {
  return stacked_system("growing", 2, horizon, [](std::size_t n, const std::vector<Int>&) {
    std::vector<int> one(n + 1, 0);
    one.push_back(1);
    return std::vector<TowerRecipe>{{one, {}}, {{0, 1}, {}}};
  });
}

}  // namespace

TEST_CASE("star product and edge composition") {
  CHECK(star_product(MarkedElement{s(2), 0}, Edge{0, s(5), 1}) == MarkedElement{s(7), 1});
  CHECK_FALSE(star_product(MarkedElement{s(2), 1}, Edge{0, s(5), 1}));
  CHECK(compose(Edge{0, s(1), 1}, Edge{1, s(4), 0}) == Edge{0, s(5), 0});
  CHECK_FALSE(compose(Edge{0, s(1), 1}, Edge{0, s(4), 0}));
}

TEST_CASE("rank-k validation") {
  CHECK(validate_rank_k(r2(6)).all_pass());
  CHECK(validate_rank_k(fb(6)).all_pass());
  CHECK(validate_rank_k(r2s(6)).all_pass());
  auto bad = r2(3);
  bad.C[1][1].g[0] += 1;
  auto rep = validate_rank_k(bad);
  auto* f = rep.first_failure();
  REQUIRE(f);
  CHECK(f->condition == Condition::III);
  CHECK(f->level == 1);
}

TEST_CASE("incidence matrices") {
  auto r = r2(5);
  auto f = fb(5);
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(r_matrix(r, n) == RMatrix{{2, 2}, {2, 2}});
    CHECK(r_matrix(f, n) == RMatrix{{2, 1}, {1, 1}});
  }
  CHECK(r_matrix(telescope_k(r, {0, 2}), 1) == RMatrix{{8, 8}, {8, 8}});
  CHECK(r_matrix(telescope_k(f, {0, 2}), 1) == RMatrix{{5, 3}, {3, 2}});
  CHECK(mat_mul(RMatrix{{2, 1}, {1, 1}}, identity_matrix(2)) == RMatrix{{2, 1}, {1, 1}});
}

TEST_CASE("invariant measure of r2 is exact and symmetric") {
  auto r = r2(10);
  auto lam = solve_invariant_measure(r);
  CHECK(lam.certified);
  for (std::size_t n = 0; n < 10; ++n)
    for (std::size_t i = 0; i < 2; ++i) CHECK(lam.lambda[n][i] == CertifiedValue::point(pow4inv(n) / 2));
  // the horizon level is only bracketed
  for (std::size_t i = 0; i < 2; ++i) CHECK(lam.lambda[10][i].contains(pow4inv(10) / 2));
  auto c = marked_cells(r, 1, {MarkedElement{s(0), 0}});
  CHECK(cylinder_measure_k(r, lam, c) == CertifiedValue::point(Rational(1, 8)));
}

TEST_CASE("fb measure direction is the Perron vector") {
  auto f = fb(60);
  auto lam = solve_invariant_measure(f, 1e-9);
  CHECK(lam.certified);
  CHECK(lam.certificate == "certified");
  auto ratio = lam.ratio(0, {1, 0}, 0, {0, 1});
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(std::abs(to_double(ratio.lo) - phi) < 1e-9);
  CHECK(std::abs(to_double(ratio.hi) - phi) < 1e-9);
  CHECK(lam.contraction_bound < 1e-9);
}

TEST_CASE("vertex measures satisfy the level recursion") {
  for (auto sys : {fb(12), r2s(8), growing(8)}) {
    auto lam = solve_invariant_measure(sys);
    for (std::size_t n = 0; n < lam.horizon; ++n) {
      RMatrix r = r_matrix(sys, n + 1);
      for (std::size_t v = 0; v < lam.vertices(); ++v)
        for (std::size_t i = 0; i < sys.rank; ++i) {
          Rational sum = 0;
          for (std::size_t j = 0; j < sys.rank; ++j) sum += Rational(r[i][j]) * lam.vertex[n + 1][v][j];
          CHECK(lam.vertex[n][v][i] == sum);
        }
    }
    CHECK(lam.linear(0, std::vector<Int>(sys.rank, 1)) == CertifiedValue::point(1));
  }
}

TEST_CASE("finiteness trend") {
  auto r = r2(8);
  auto t = check_finiteness_k(r, solve_invariant_measure(r));
  for (const auto& v : t.values) CHECK(v == CertifiedValue::point(1));
  CHECK(t.verdict == Verdict::finite);
  auto h = as_rank_k(hk(8));
  auto th = check_finiteness_k(h, solve_invariant_measure(h));
  CHECK(th.verdict == Verdict::infinite);
  CHECK(th.values[8] == CertifiedValue::point(256));
}

TEST_CASE("rank-k action ratio loses only the top cells") {
  auto r = r2(4);
  auto lam = solve_invariant_measure(r);
  auto rows = check_ae_action_k(r, lam, s(1));
  bool seen = false;
  for (const auto& x : rows)
    if (x.n == 0 && x.m == 2) {
      seen = true;
      CHECK(x.ratio == CertifiedValue::point(Rational(15, 16)));
    }
  CHECK(seen);
}

TEST_CASE("castle view") {
  auto cv = castle_view(r2(3));
  const auto& t1 = cv.stages[0].towers[0];
  REQUIRE(t1.placements.size() == 4);
  std::vector<int> src;
  std::vector<Int> off;
  for (const auto& p : t1.placements) src.push_back(p.source), off.push_back(p.offset[0]);
  CHECK(src == std::vector<int>{0, 0, 1, 1});
  CHECK(off == std::vector<Int>{0, 1, 2, 3});
  for (const auto& g : t1.gaps) CHECK(g == 0);
  CHECK(no_spacers(cv.stages[0]));

  auto cc = castle_view(as_rank_k(chacon(4)));
  for (std::size_t n = 1; n < 4; ++n) {
    const auto& t = cc.stages[n].towers[0];
    Int h = cc.heights[n][0];
    REQUIRE(t.placements.size() == 3);
    CHECK(t.placements[1].offset[0] == h);
    CHECK(t.placements[2].offset[0] == 2 * h + 1);
    CHECK(t.gaps == std::vector<Int>{0, 1, 0});
    CHECK_FALSE(no_spacers(cc.stages[n]));
  }
}

TEST_CASE("spacer roofs on chacon") {
  auto c = as_rank_k(chacon(4));
  auto d1 = spacer_data(c, 1);
  CHECK(d1.towers[0].positions == std::vector<Int>{0, 1, 3});
  CHECK(d1.towers[0].roof[0] == Int(1));
  CHECK(d1.towers[0].roof[1] == Int(2));
  CHECK_FALSE(d1.towers[0].roof[2]);
  auto d2 = spacer_data(c, 2);
  const auto& p = d2.towers[0].positions;
  auto it = std::find(p.begin(), p.end(), Int(3));
  REQUIRE(it != p.end());
  CHECK(d2.towers[0].roof[it - p.begin()] == Int(1));
}

TEST_CASE("balanced diagnostics") {
  auto r = r2(6);
  auto br = balanced_diagnostics(r, solve_invariant_measure(r));
  for (std::size_t n = 0; n < 6; ++n)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(br.delta[n][j] == CertifiedValue::point(Rational(1, 2)));
      CHECK(br.Lambda[n][j] == CertifiedValue::point(Rational(1, 2)));
    }
  CHECK(br.min_Lambda == CertifiedValue::point(Rational(1, 2)));
  CHECK(br.balanced);

  auto f = fb(40);
  auto bf = balanced_diagnostics(f, solve_invariant_measure(f));
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(std::abs(to_double(bf.Lambda[20][0].mid()) - phi / (1 + phi)) < 1e-6);
  CHECK(std::abs(to_double(bf.Lambda[20][1].mid()) - 1 / (1 + phi)) < 1e-6);
  CHECK(bf.balanced);

  auto g = growing(20);
  auto bg = balanced_diagnostics(g, solve_invariant_measure(g));
  CHECK(bg.Lambda[18][1].hi < bg.Lambda[4][1].lo);
  CHECK_FALSE(bg.balanced);
}

TEST_CASE("cylinder refinement in rank k matches placement enumeration") {
  auto r = r2(5);
  auto o = oracle::stacked({{0, 0, 1, 1}, {1, 1, 0, 0}}, 5);
  for (int t = 0; t < 2; ++t)
    for (long p = 0; p < 4; ++p) {
      auto c = refine_k(r, marked_cells(r, 1, {MarkedElement{s(p), t}}), 4);
      for (int j = 0; j < 2; ++j) {
        oracle::Set got;
        for (const auto& e : c.support[j].elements()) got.push_back(e[0].get_si());
        CHECK(got == oracle::positions_k(o, t, p, 1, j, 4));
      }
    }
}
