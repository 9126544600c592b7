#include "cflab/catalog.hpp"
#include "cflab/dynamics.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace cflab;

namespace {

GroupElement s(long v) { return GroupElement::scalar(v); }

MarkedCylinder cells(std::size_t level, std::initializer_list<long> ps) {
  std::vector<GroupElement> el;
  for (long p : ps) el.push_back(s(p));
  return MarkedCylinder{level, {GroupSet(1, el)}};
}

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("odometer shift by two preserves the first digit") {
  auto o = as_rank_k(odometer(6));
  auto lam = solve_invariant_measure(o);
  auto A = cells(1, {0});
  auto wrap = correlation(o, lam, A, A, s(2), 3, EscapePolicy::wrap_if_certified);
  CHECK(wrap == CertifiedValue::point(q(1, 2)));
  auto charged = correlation(o, lam, A, A, s(2), 3, EscapePolicy::charge);
  CHECK(charged.contains(q(1, 2)));
  CHECK(charged.width() == q(1, 8));
}

TEST_CASE("chacon unit shift correlation brackets two returns") {
  auto c = as_rank_k(chacon(8));
  auto lam = solve_invariant_measure(c);
  auto A = cells(0, {0});
  auto v = correlation(c, lam, A, A, s(1), 4);
  CHECK(v.lo >= q(4, 9));
  CHECK(v.contains(correlation(c, lam, A, A, s(1), 7)));
}

TEST_CASE("tower correlation matches brute force and nests in depth") {
  std::mt19937 rng(17);
  for (int which = 0; which < 2; ++which) {
    auto sys = which ? hk(10) : chacon(10);
    auto o = which ? oracle::hk(10) : oracle::chacon(10);
    auto k = as_rank_k(sys);
    auto lam = rank_one_measure(sys, 10);
    for (int t = 0; t < 25; ++t) {
      std::size_t n = rng() % 3;
      long a = static_cast<long>(rng() % o.h[n]), b = static_cast<long>(rng() % o.h[n]);
      long g = static_cast<long>(rng() % 11) - 5;
      CertifiedValue prev(0, 1000);
      for (std::size_t L = n + 1; L <= 8; ++L) {
        auto v = correlation(k, lam, cells(n, {a}), cells(n, {b}), s(g), L, EscapePolicy::charge);
        auto cnt = oracle::correlation(o, {a}, n, {b}, n, g, L);
        CHECK(v.lo == q(cnt.lo, cnt.den));
        CHECK(v.hi == q(cnt.lo + cnt.escape, cnt.den));
        CHECK(prev.contains(v));
        prev = v;
      }
    }
  }
}

TEST_CASE("odometer window ratio is exactly the product of measures") {
  auto o = odometer(16);
  for (std::size_t l = 2; l <= 10; ++l) {
    auto r = wre_ratio_rank_one(o, Cylinder{1, GroupSet::scalars({0})}, Cylinder{1, GroupSet::scalars({0})}, l, l + 3);
    CHECK(r.ratio == CertifiedValue::point(q(1, 4)));
    CHECK(r.target == CertifiedValue::point(q(1, 4)));
  }
}

TEST_CASE("hk window ratio approaches the product at depth") {
  auto h = hk(40);
  Cylinder A{2, GroupSet::scalars({0})};
  auto shallow = wre_ratio_rank_one(h, A, A, 6, 12);
  auto deep = wre_ratio_rank_one(h, A, A, 6, 40);
  CHECK(shallow.ratio.contains(deep.ratio));
  CHECK(deep.ratio.width() < q(1, 10000));
  Rational target = q(1, 16);
  CHECK(abs(deep.ratio.hi - target) / target <= q(5, 100));
  CHECK(abs(deep.ratio.lo - target) / target <= q(5, 100));
}

TEST_CASE("normalized window sums") {
  auto o = odometer(8);
  auto ko = as_rank_k(o);
  auto v = a_n(ko, rank_one_measure(o, 8), cells(1, {0}), Box::interval(0, 4), 4);
  CHECK(v == CertifiedValue::point(4));
  auto h = hk(10);
  auto kh = as_rank_k(h);
  auto w = a_n(kh, rank_one_measure(h, 10), cells(0, {0}), Box::interval(0, 16), 8);
  CHECK(w.hi < 16);
}

TEST_CASE("window ratio bound on random hk cylinders") {
  auto h = hk(12);
  std::mt19937 rng(23);
  const GroupSet x3 = refine(h, base_cylinder(h), 3).support;
  for (int t = 0; t < 20; ++t) {
    auto pick = [&] {
      std::vector<GroupElement> el;
      for (const auto& x : x3.elements())
        if (rng() % 2) el.push_back(x);
      return Cylinder{3, GroupSet(1, el)};
    };
    Cylinder A = pick(), B = pick();
    if (A.support.empty() || B.support.empty()) continue;
    auto b = bound_check_rank_one(h, A, B, 2, 8);
    CHECK(b.pass);
  }
}

TEST_CASE("r2s window ratio and bound") {
  auto r = r2s(8);
  auto lam = solve_invariant_measure(r);
  for (std::size_t l = 1; l <= 3; ++l) {
    MarkedCylinder A = refine_k(r, base_cylinder(r), l);
    A.support[1] = GroupSet(1);
    auto rep = wre_ratio_rank_k(r, lam, A, A, l, 7);
    CHECK(rep.ratio.lo <= rep.ratio.hi);
    CHECK(sgn(rep.ratio.lo) >= 0);
    auto b = bound_check_rank_k(r, lam, A, A, l, 7);
    CHECK(b.pass);
  }
}

// Points of r2 labelled by their level-l tower, built by concatenating
// [1,1,2,2] / [2,2,1,1] up to level L; escapes bound the sum from above.
static std::pair<Rational, Rational> r2_tower_one_ratio(std::size_t l, std::size_t L) {
  const std::size_t hl = std::size_t(1) << (2 * l);
  std::vector<int> t1(hl, 1), t2(hl, 2);
  for (std::size_t n = l; n < L; ++n) {
    std::vector<int> a = t1, b = t2;
    a.insert(a.end(), t1.begin(), t1.end());
    a.insert(a.end(), t2.begin(), t2.end());
    a.insert(a.end(), t2.begin(), t2.end());
    b.insert(b.end(), t2.begin(), t2.end());
    b.insert(b.end(), t1.begin(), t1.end());
    b.insert(b.end(), t1.begin(), t1.end());
    t1 = std::move(a);
    t2 = std::move(b);
  }
  long hits = 0, escapes = 0;
  for (const auto* s : {&t1, &t2})
    for (std::size_t p = 0; p < s->size(); ++p) {
      if ((*s)[p] != 1) continue;
      for (std::size_t g = 0; g < hl; ++g) {
        if (p + g >= s->size()) ++escapes;
        else if ((*s)[p + g] == 1) ++hits;
      }
    }
  const Int scale = Int(static_cast<unsigned long>(2 * t1.size())) * static_cast<unsigned long>(hl);
  return {make_rational(Int(hits), scale), make_rational(Int(hits + escapes), scale)};
}

TEST_CASE("r2 tower-one window ratio matches a concatenation count") {
  auto r = r2(10);
  auto lam = solve_invariant_measure(r);
  for (std::size_t l = 1; l <= 3; ++l) {
    MarkedCylinder A = refine_k(r, base_cylinder(r), l);
    A.support[1] = GroupSet(1);
    auto rep = wre_ratio_rank_k(r, lam, A, A, l, l + 5);
    auto [lo, hi] = r2_tower_one_ratio(l, l + 5);
    CAPTURE(l);
    CHECK(rep.ratio.intersects(CertifiedValue{lo, hi}));
    if (l == 3) {
      // the set moves with the window, so the limit is 2/5 rather than mu(A)^2
      CHECK(rep.ratio.lo > Rational(2, 5));
      CHECK(rep.ratio.hi < Rational(41, 100));
    }
  }
}

TEST_CASE("abelian window sums on the Z^2 witness") {
  auto z = z2lh(3);
  auto base = base_cylinder(z);
  auto r = abelian_window_sums(z, base, base, 1, 3);
  REQUIRE(r.denominator_identity);
  CHECK(*r.denominator_identity);
  CHECK(r.denominator_expected == 2);
  auto one = refine(z, base, 1);
  Cylinder A{1, GroupSet::singleton(one.support.elements()[0])};
  auto ra = abelian_window_sums(z, A, base, 1, 3);
  CHECK(ra.mu_a == CertifiedValue::point(q(1, 2)));
  CHECK(ra.ratio.contains(ra.mu_a.lo));
}

TEST_CASE("tower model errors") {
  auto o = as_rank_k(odometer(4));
  auto lam = solve_invariant_measure(o);
  CHECK_THROWS_AS(TowerModel(o, lam, 9), Error);
  CHECK_THROWS_AS(wre_ratio_rank_one(hk(6), Cylinder{0, GroupSet::scalars({5})}, Cylinder{0, GroupSet::scalars({0})}, 2, 4),
                  Error);
}
