#include "cflab/bratteli.hpp"
#include "cflab/catalog.hpp"
#include "cflab/finite_rank.hpp"

#include "doctest.h"

using namespace cflab;

TEST_CASE("r2 diagram shape and order ranks") {
  auto d = export_diagram(r2(4));
  CHECK(d.k == 2);
  REQUIRE(d.levels.size() == 5);
  CHECK(d.levels[0].size() == 2);
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(d.levels[n].size() == 8);
    std::vector<int> into1(4), into2(4);
    for (const auto& e : d.levels[n]) (e.target == 0 ? into1 : into2)[e.rank] = e.source;
    CHECK(into1 == std::vector<int>{0, 0, 1, 1});
    CHECK(into2 == std::vector<int>{1, 1, 0, 0});
  }
}

TEST_CASE("fb diagram multiplicities") {
  auto d = export_diagram(fb(5));
  for (std::size_t n = 1; n <= 5; ++n) {
    int m[2][2] = {{0, 0}, {0, 0}};
    for (const auto& e : d.levels[n]) ++m[e.source][e.target];
    CHECK(m[0][0] == 2);
    CHECK(m[0][1] == 1);
    CHECK(m[1][0] == 1);
    CHECK(m[1][1] == 1);
  }
}

TEST_CASE("odometer paths are binary digits and the successor adds one") {
  auto o = as_rank_k(odometer(8));
  auto d = export_diagram(o);
  for (long p = 0; p < 256; ++p) {
    auto path = path_of(o, 0, p, 8);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(d.levels[n][path.edges[n]].rank == static_cast<std::size_t>((p >> (n - 1)) & 1));
    auto succ = vershik_successor(d, path);
    if (p == 255) {
      CHECK_FALSE(succ);
    } else {
      REQUIRE(succ);
      CHECK(*succ == path_of(o, 0, p + 1, 8));
    }
  }
}

TEST_CASE("diagram round trip") {
  auto r = r2(5);
  auto back = to_cf(export_diagram(r));
  CHECK(back.F == r.F);
  CHECK(back.C == r.C);
  auto f = fb(6);
  auto fback = to_cf(export_diagram(f));
  CHECK(fback.F == f.F);
  CHECK(fback.C == f.C);
}

TEST_CASE("permuted order still tiles with new offsets") {
  auto r = r2(4);
  auto p = permute_ranks(export_diagram(r), 2);
  auto sys = to_cf(p);
  CHECK(validate_rank_k(sys).all_pass());
  CHECK(sys.C[2] != r.C[2]);
  CHECK(sys.F == r.F);
  for (const auto& st : castle_view(sys).stages) CHECK(no_spacers(st));
  CHECK_THROWS_AS(permute_ranks(export_diagram(r), 0), Error);
}

TEST_CASE("successor oracle") {
  CHECK(equivalence_oracle(r2(6), 4).pass);
  CHECK(equivalence_oracle(r2(6), 4).checked == 2 * 256);
  CHECK(equivalence_oracle(as_rank_k(odometer(8)), 8).pass);
  CHECK(equivalence_oracle(fb(8), 6).pass);
  auto r = r2(6);
  auto bad = equivalence_oracle(r, permute_ranks(export_diagram(r), 2), 4);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.counterexample.empty());
}

TEST_CASE("spacers are rejected") {
  CHECK_THROWS_AS(export_diagram(r2s(3)), Error);
  CHECK_THROWS_AS(export_diagram(as_rank_k(chacon(3))), Error);
}

TEST_CASE("json and dot serialization") {
  auto d = export_diagram(r2(3));
  auto j = to_json(d);
  CHECK(j["k"] == 2);
  CHECK(j["levels"][1]["edges"][0]["id"] == "e1_1_0");
  CHECK(j["levels"][0]["edges"][0]["src"] == 0);
  CHECK(diagram_from_json(j) == d);
  CHECK(to_json(export_diagram(r2(3))).dump() == j.dump());
  auto dot = to_dot(d);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("id=\"e2_2_3\"") != std::string::npos);
  auto broken = j;
  broken["levels"][1]["edges"][0]["rank"] = 1;
  CHECK_THROWS_AS(diagram_from_json(broken), Error);
}

TEST_CASE("path validation") {
  auto d = export_diagram(r2(3));
  CHECK_THROWS_AS(check_path(d, AdicPath{{0, 2}}), Error);
  CHECK_NOTHROW(check_path(d, minimal_path(d, 0, 3)));
}
