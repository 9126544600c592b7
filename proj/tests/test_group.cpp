#include "cflab/group.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace cflab;

namespace {

GroupSet from(const oracle::Set& s) {
  std::vector<GroupElement> el;
  for (long x : s) el.push_back(GroupElement::scalar(x));
  return GroupSet(1, el);
}

oracle::Set to_plain(const GroupSet& g) {
  oracle::Set out;
  for (const auto& e : g.elements()) out.push_back(e[0].get_si());
  return out;
}

}  // namespace

TEST_CASE("sumset of two small sets") {
  auto s = sumset(GroupSet::scalars({0, 1, 3}), GroupSet::scalars({0, 4, 9}));
  CHECK(to_plain(s) == oracle::Set{0, 1, 3, 4, 5, 7, 9, 10, 12});
  CHECK(s.size() == 9);
}

TEST_CASE("diffset collapses repeated differences") {
  auto d = diffset(GroupSet::scalars({0, 100}), GroupSet::scalars({0, 100}));
  CHECK(to_plain(d) == oracle::Set{-100, 0, 100});
}

TEST_CASE("folner defect of a unit shift on a square") {
  auto f = GroupSet::box(Box(GroupElement{0, 0}, {10, 10}));
  CHECK(folner_defect(GroupElement{1, 0}, f) == Rational(1, 5));
  CHECK(folner_defect(GroupElement{0, 0}, f) == 0);
}

TEST_CASE("cover of F - F by disjoint translates") {
  SUBCASE("interval") {
    auto c = cover_by_translates(GroupSet::interval(0, 4));
    CHECK(c.k == 2);
    CHECK(to_plain(c.offsets) == oracle::Set{-3, 1});
  }
  SUBCASE("square") {
    auto c = cover_by_translates(GroupSet::box(Box(GroupElement{0, 0}, {2, 2})));
    CHECK(c.k == 4);
    CHECK(c.offsets == GroupSet(2, {GroupElement{-1, -1}, GroupElement{-1, 1}, GroupElement{1, -1}, GroupElement{1, 1}}));
    // disjoint and covering, checked cell by cell
    auto f = GroupSet::box(Box(GroupElement{0, 0}, {2, 2}));
    auto d = diffset(f, f);
    for (const auto& x : d.elements()) {
      int hits = 0;
      for (const auto& o : c.offsets.elements()) hits += f.translate(o).contains(x) ? 1 : 0;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("disjoint translates report an overlap witness") {
  auto f = GroupSet::interval(0, 4);
  CHECK(disjoint_translates(f, GroupSet::scalars({0, 4, 9})).disjoint);
  auto bad = disjoint_translates(f, GroupSet::scalars({0, 4, 6}));
  CHECK_FALSE(bad.disjoint);
  REQUIRE(bad.witness);
  CHECK(bad.witness->first == GroupElement::scalar(4));
  CHECK(bad.witness->second == GroupElement::scalar(6));
}

TEST_CASE("box sets and explicit sets agree") {
  auto box = GroupSet::interval(-3, 5);
  GroupSet expl(1, box.elements());
  CHECK(box == expl);
  CHECK(expl.as_box());
  CHECK(box.size() == 8);
  CHECK(box.contains(GroupElement::scalar(-3)));
  CHECK_FALSE(box.contains(GroupElement::scalar(5)));
}

TEST_CASE("random sumsets and diffsets match enumeration") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> val(-40, 40);
  std::uniform_int_distribution<int> len(1, 8);
  for (int t = 0; t < 200; ++t) {
    oracle::Set a, b;
    for (int i = len(rng); i > 0; --i) a.push_back(val(rng));
    for (int i = len(rng); i > 0; --i) b.push_back(val(rng));
    a = oracle::norm(a);
    b = oracle::norm(b);
    CHECK(to_plain(sumset(from(a), from(b))) == oracle::sumset(a, b));
    CHECK(to_plain(diffset(from(a), from(b))) == oracle::diffset(a, b));
  }
}

TEST_CASE("random box translates and intersections") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> v(-10, 10);
  std::uniform_int_distribution<long> e(0, 6);
  for (int t = 0; t < 200; ++t) {
    Box a(GroupElement{v(rng), v(rng)}, {e(rng), e(rng)});
    Box b(GroupElement{v(rng), v(rng)}, {e(rng), e(rng)});
    Box i = intersect(a, b);
    Int count = 0;
    for (long x = -20; x <= 20; ++x)
      for (long y = -20; y <= 20; ++y) {
        GroupElement p{x, y};
        bool in = a.contains(p) && b.contains(p);
        CHECK(in == i.contains(p));
        count += in ? 1 : 0;
      }
    CHECK(count == i.size());
    CHECK(a.intersects(b) == (count > 0));
  }
}

TEST_CASE("dimension mismatch is an error") {
  CHECK_THROWS_AS((GroupElement{1} + GroupElement{1, 2}), Error);
  CHECK_THROWS_AS((sumset(GroupSet::scalars({0}), GroupSet(2, {GroupElement{0, 0}}))), Error);
}
