// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cflab/bratteli.hpp"
#include "cflab/catalog.hpp"
#include "cflab/dsl.hpp"
#include "cflab/dynamics.hpp"
#include "cflab/finite_rank.hpp"
#include "cflab/rank_one.hpp"
#include "cflab/rigidity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace cflab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string failure;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      failure = what;
    }
  }
};

GroupElement s(long v) { return GroupElement::scalar(v); }

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

GroupSet random_subset(const GroupSet& from, std::mt19937& rng, bool nonempty = true) {
  const auto& el = from.elements();
  std::vector<GroupElement> out;
  for (const auto& x : el)
    if (rng() % 2) out.push_back(x);
  if (nonempty && out.empty() && !el.empty()) out.push_back(el[rng() % el.size()]);
  return GroupSet(from.dim(), out);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

Outcome exact_measure_suite() {
  Outcome o;
  std::mt19937 rng(101);
  std::vector<RankOneSystem> systems = {odometer(8), chacon(6), hk(8), z2lh(3)};
  auto r = r2(6);
  auto lam = solve_invariant_measure(r);
  std::size_t cases = 0;
  for (int t = 0; t < 1000; ++t) {
    if (t % 5 == 4) {
      std::size_t n = rng() % 4;
      MarkedCylinder A{n, {}}, B{n, {}};
      for (std::size_t j = 0; j < 2; ++j) {
        A.support.push_back(random_subset(r.F[n][j], rng, false));
        B.support.push_back(random_subset(r.F[n][j], rng, false));
      }
      MarkedCylinder U{n, {}}, I{n, {}};
      for (std::size_t j = 0; j < 2; ++j) {
        U.support.push_back(set_union(A.support[j], B.support[j]));
        I.support.push_back(set_intersection(A.support[j], B.support[j]));
      }
      auto mu = [&](const MarkedCylinder& c) { return cylinder_measure_k(r, lam, c); };
      auto ma = mu(A), mb = mu(B), mu_u = mu(U), mi = mu(I);
      o.require(ma.lo == ma.hi && mb.lo == mb.hi && mu_u.lo == mu_u.hi && mi.lo == mi.hi, "r2 measure not exact");
      o.require(mu_u.lo + mi.lo == ma.lo + mb.lo, "additivity on r2");
      o.require(mu(refine_k(r, A, n + 1 + rng() % 2)) == ma, "refinement on r2");
    } else {
      const auto& sys = systems[t % 5 % systems.size()];
      std::size_t n = rng() % (sys.dim == 1 ? 4 : 2);
      GroupSet A = random_subset(sys.F[n], rng, false), B = random_subset(sys.F[n], rng, false);
      auto mu = [&](const GroupSet& g) { return measure(sys, Cylinder{n, g}); };
      o.require(mu(set_union(A, B)) + mu(set_intersection(A, B)) == mu(A) + mu(B), "additivity on " + sys.name);
      std::size_t L = n + 1 + rng() % 2;
      o.require(measure(sys, refine(sys, Cylinder{n, A}, L)) == mu(A), "refinement on " + sys.name);
    }
    ++cases;
  }
  o.detail = std::to_string(cases) + " random cylinders";
  return o;
}

Outcome expansion_cross_check() {
  Outcome o;
  std::mt19937 rng(202);
  std::size_t cases = 0;
  for (int which = 0; which < 2; ++which) {
    auto sys = which ? hk(10) : chacon(10);
    auto k = as_rank_k(sys);
    auto lam = rank_one_measure(sys, 10);
    for (int t = 0; t < 100; ++t) {
      std::size_t n = rng() % 2;
      long h = sys.F[n].size().get_si();
      long a = static_cast<long>(rng() % h), b = static_cast<long>(rng() % h);
      long g = static_cast<long>(rng() % 11) - 5;
      MarkedCylinder A{n, {GroupSet::singleton(s(b))}}, B{n, {GroupSet::singleton(s(a))}};
      std::optional<Rational> prev_e, prev_t;
      for (std::size_t L = n + 1; L <= 6; ++L) {
        auto e = return_expansions(sys, s(g), s(a), s(b), n, L).value;
        auto tw = correlation(k, lam, A, B, s(g), L, EscapePolicy::charge);
        // certified value at L+3: both methods there, intersected
        auto de = return_expansions(sys, s(g), s(a), s(b), n, L + 3).value;
        auto dt = correlation(k, lam, A, B, s(g), L + 3, EscapePolicy::charge);
        o.require(e.intersects(tw), "expansion and tower intervals disjoint");
        o.require(de.intersects(dt), "depth L+3 methods disagree");
        CertifiedValue deep(std::max(de.lo, dt.lo), std::min(de.hi, dt.hi));
        o.require(e.contains(deep) && tw.contains(deep), "depth L+3 value escapes");
        if (prev_e) o.require(e.width() <= *prev_e && tw.width() <= *prev_t, "width grew with depth");
        prev_e = e.width();
        prev_t = tw.width();
      }
      ++cases;
    }
  }
  o.detail = std::to_string(cases) + " (g,a,b,n) on chacon and hk, L up to 6";
  return o;
}

Outcome odometer_wre() {
  Outcome o;
  auto od = odometer(16);
  Cylinder A{1, GroupSet::scalars({0})};
  for (std::size_t l = 2; l <= 10; ++l) {
    auto r = wre_ratio_rank_one(od, A, A, l, l + 3);
    o.require(r.ratio == CertifiedValue::point(q(1, 4)), "l=" + std::to_string(l) + " ratio " + r.ratio.str());
  }
  o.detail = "ratio 1/4 exactly for l = 2..10 at depth l+3";
  return o;
}

Outcome chacon_trend() {
  Outcome o;
  auto t = total_measure_trend(chacon(15));
  o.require(t.values.size() == 16, "horizon");
  o.require(t.values[0] == 1 && t.values[1] == q(4, 3) && t.values[2] == q(13, 9), "leading values");
  const double dev = std::abs(to_double(t.values[15]) - 1.5);
  o.require(dev < 1e-6, "|value - 3/2| = " + fmt(dev));
  o.require(t.verdict == Verdict::finite && t.limit && *t.limit == q(3, 2), "certified limit");
  o.detail = "value at n=15 within " + fmt(dev) + " of 3/2, limit certified";
  return o;
}

Outcome window_bounds() {
  Outcome o;
  std::mt19937 rng(505);
  auto h = hk(40);
  std::size_t pairs = 0;
  for (int t = 0; t < 200; ++t) {
    std::size_t n = rng() % 4;
    const GroupSet xn = refine(h, base_cylinder(h), n).support;
    Cylinder A{n, random_subset(xn, rng)}, B{n, random_subset(xn, rng)};
    std::size_t l = 1 + rng() % 6;
    // deepen until the interval decides the bound
    BoundCheck b;
    for (std::size_t L = l + 6; L <= 40; L += 4) {
      b = bound_check_rank_one(h, A, B, l, L);
      if (b.pass) break;
    }
    o.require(b.pass, "hk pair " + std::to_string(t) + ": " + b.ratio.str() + " > " + b.bound.get_str());
    ++pairs;
  }
  auto r = r2s(8);
  auto lam = solve_invariant_measure(r);
  std::size_t kpairs = 0;
  for (int t = 0; t < 12; ++t) {
    std::size_t l = 1 + t % 3;
    MarkedCylinder base = refine_k(r, base_cylinder(r), l);
    MarkedCylinder A{l, {}}, B{l, {}};
    for (std::size_t j = 0; j < 2; ++j) {
      A.support.push_back(random_subset(base.support[j], rng, false));
      B.support.push_back(random_subset(base.support[j], rng, false));
    }
    if (A.support[0].empty() && A.support[1].empty()) A = base;
    if (B.support[0].empty() && B.support[1].empty()) B = base;
    auto b = bound_check_rank_k(r, lam, A, B, l, 7);
    o.require(b.pass, "r2s pair " + std::to_string(t) + ": " + b.ratio.str() + " > " + b.bound.get_str());
    ++kpairs;
  }
  o.detail = std::to_string(pairs) + " hk pairs, " + std::to_string(kpairs) + " r2s pairs";
  return o;
}

Outcome hk_convergence() {
  Outcome o;
  std::mt19937 rng(606);
  auto h = hk(60);
  const GroupSet x3 = refine(h, base_cylinder(h), 3).support;
  std::size_t worst_l = 0;
  double worst_dev = 0;
  for (int t = 0; t < 20; ++t) {
    Cylinder A{3, random_subset(x3, rng)}, B{3, random_subset(x3, rng)};
    // certified deviation per l, depth raised until the width is below 1e-4
    std::vector<std::optional<double>> dev(13);
    for (std::size_t l = 3; l <= 12; ++l) {
      for (std::size_t L = l + 8; L <= 60; L += 2) {
        auto r = wre_ratio_rank_one(h, A, B, l, L);
        if (r.ratio.width() >= q(1, 10000)) continue;
        const Rational target = r.target.mid();
        dev[l] = std::max(std::abs(to_double((r.ratio.lo - target) / target)),
                          std::abs(to_double((r.ratio.hi - target) / target)));
        break;
      }
    }
    std::optional<std::size_t> first;
    for (std::size_t l = 12; l >= 3; --l) {
      if (!dev[l] || *dev[l] > 0.05) break;
      first = l;
    }
    o.require(first.has_value(), "pair " + std::to_string(t) + " never within 5% for l <= 12");
    if (first && *first >= worst_l) {
      worst_l = *first;
      worst_dev = *dev[*first];
    }
  }
  o.detail = "all 20 pairs within 5% from l = " + std::to_string(worst_l) + " on (deviation " + fmt(worst_dev) +
             "), width < 1e-4";
  return o;
}

Outcome measure_solver() {
  Outcome o;
  auto f = fb(60);
  auto lam = solve_invariant_measure(f, 1e-9);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  auto ratio = lam.ratio(0, std::vector<Rational>{1, 0}, 0, std::vector<Rational>{0, 1});
  const double err = std::max(std::abs(to_double(ratio.lo) - phi), std::abs(to_double(ratio.hi) - phi));
  o.require(err < 1e-9, "fb ratio off by " + fmt(err));
  o.require(lam.certified && lam.certificate == "certified", "fb not certified");
  auto r = r2(12);
  auto lr = solve_invariant_measure(r);
  for (std::size_t n = 0; n < 12; ++n)
    for (std::size_t i = 0; i < 2; ++i) {
      Rational want(1, 2);
      want /= Rational(Int(1) << static_cast<unsigned>(2 * n));
      o.require(lr.lambda[n][i] == CertifiedValue::point(want), "r2 lambda at level " + std::to_string(n));
    }
  o.detail = "fb ratio error " + fmt(err) + ", r2 exact for n < 12 (level 12 is the horizon)";
  return o;
}

Outcome rigidity_guarantee() {
  Outcome o;
  auto r = r2(12);
  auto lr = solve_invariant_measure(r);
  Rational worst_r = 1;
  for (std::size_t n = 1; n <= 10; ++n) {
    auto f = find_rigidity_time(r, lr, n, n + 2);
    o.require(f.ratio.lo >= f.guarantee && f.guarantee == q(1, 4), "r2 guarantee at n=" + std::to_string(n));
    o.require(to_double(f.ratio.lo) >= 0.5 - 1e-6, "r2 ratio below 1/2 at n=" + std::to_string(n));
    worst_r = std::min(worst_r, f.ratio.lo);
  }
  auto od = as_rank_k(odometer(13));
  auto lo = solve_invariant_measure(od);
  for (std::size_t n = 1; n <= 10; ++n) {
    auto f = find_rigidity_time(od, lo, n, n + 3);
    o.require(f.ratio.lo >= f.guarantee && f.guarantee == 1, "odometer guarantee at n=" + std::to_string(n));
  }
  std::vector<Int> primes;
  for (long p = 2; p < 100; ++p) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
    if (prime) primes.push_back(p);
  }
  auto r8 = r2(8);
  auto eta = partial_rigidity_estimate(r8, solve_invariant_measure(r8), primes, 1, 8).eta;
  o.require(eta < q(1, 20), "prime times give eta " + eta.get_str());
  o.detail = "r2 min ratio " + worst_r.get_str() + ", odometer full, prime-time eta " + eta.get_str();
  return o;
}

Outcome vershik_oracle() {
  Outcome o;
  Int checked = 0;
  for (auto sys : {r2(6), fb(6), as_rank_k(odometer(6))}) {
    auto rep = equivalence_oracle(sys, 6);
    o.require(rep.pass, sys.name + ": " + rep.counterexample);
    checked += rep.checked;
  }
  auto r = r2(6);
  auto bad = equivalence_oracle(r, permute_ranks(export_diagram(r), 2), 6);
  o.require(!bad.pass && !bad.counterexample.empty(), "permuted export passed");
  o.detail = checked.get_str() + " successors checked; permuted: " + bad.counterexample;
  return o;
}

Outcome condition_checkers() {
  Outcome o;
  auto fixed = [](std::vector<TowerRecipe> recipes) {
    return [recipes](std::size_t, const std::vector<Int>&) { return recipes; };
  };
  auto r = r2(8);
  o.require(all_pass(co_condition(r)), "co fails on r2");
  o.require(all_pass(nondegeneracy_check(r)), "nondegeneracy fails on r2");
  auto inter = stacked_system("interleaved", 2, 4, fixed({{{0, 1, 0, 1}, {}}, {{1, 1, 0, 0}, {}}}));
  o.require(!all_pass(co_condition(inter)), "co passes on the interleaved mutation");
  auto single = stacked_system("single-entry", 2, 4, fixed({{{0, 0, 0, 1}, {}}, {{1, 1, 0, 0}, {}}}));
  o.require(!all_pass(nondegeneracy_check(single)), "nondegeneracy passes on the single-entry mutation");

  // the condition is required for every g; a radius-3 ball stands in for G
  auto z = z2lh(5);
  for (std::size_t n = 0; n < z.horizon(); ++n) {
    for (const auto& g : {GroupElement{1, 0}, GroupElement{0, 1}})
      o.require(large_holes_check(z, g, n).pass, "large holes fail on z2lh at n=" + std::to_string(n));
    for (long x = -3; x <= 3; ++x)
      for (long y = -3; y <= 3; ++y)
        o.require(large_holes_check(z, GroupElement{x, y}, n).pass, "large holes fail on z2lh in the ball");
  }
  // shrunk: some g in the ball must break the condition at every level
  auto tight = z2lh(5, 2);
  std::string shrunk;
  for (long x = -3; x <= 3 && shrunk.empty(); ++x)
    for (long y = -3; y <= 3 && shrunk.empty(); ++y) {
      bool always = true;
      for (std::size_t n = 0; n < tight.horizon(); ++n) always = always && !large_holes_check(tight, GroupElement{x, y}, n).pass;
      if (always) shrunk = "g=(" + std::to_string(x) + "," + std::to_string(y) + ") at every level";
    }
  o.require(!shrunk.empty(), "shrunk z2lh passes the large-holes check");

  auto z3 = z2lh(3);
  auto base = base_cylinder(z3);
  for (std::size_t n = 1; n <= 2; ++n) {
    auto rep = abelian_window_sums(z3, base, base, n, 3);
    o.require(rep.denominator_identity && *rep.denominator_identity, "denominator identity at n=" + std::to_string(n));
  }
  o.detail = "mutations rejected, shrunk factor fails at " + shrunk + ", denominator identity holds";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome parser_corpus() {
  Outcome o;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(CFLAB_DSL_DIR))
    if (e.path().extension() == ".cf") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::size_t valid = 0, invalid = 0;
  for (const auto& f : files) {
    fs::path golden = f;
    golden.replace_extension(".golden");
    const std::string text = slurp(f);
    std::string out;
    try {
      auto d = parse_system(text);
      out = print(d);
      auto again = parse_system(out);
      o.require(structurally_equal(d, again) && print(again) == out, f.filename().string() + " round trip");
      ++valid;
    } catch (const DslError& e) {
      out = "error " + std::to_string(e.pos().line) + ":" + std::to_string(e.pos().col) + ": " + e.message() + "\n";
      ++invalid;
    }
    o.require(out == slurp(golden), f.filename().string() + " differs from golden");
  }
  o.require(files.size() == 30, "corpus has " + std::to_string(files.size()) + " files");
  o.detail = std::to_string(valid) + " valid, " + std::to_string(invalid) + " invalid, goldens and round trip match";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact measure suite", 5, exact_measure_suite},
      {2, "expansion vs tower cross-check", 30, expansion_cross_check},
      {3, "odometer window ratio exactness", 0, odometer_wre},
      {4, "chacon total-measure trend", 0, chacon_trend},
      {5, "window ratio bounds (hk, r2s)", 60, window_bounds},
      {6, "hk convergence within 5%", 60, hk_convergence},
      {7, "invariant measure solver", 0, measure_solver},
      {8, "rigidity guarantee and prime control", 0, rigidity_guarantee},
      {9, "vershik successor oracle", 0, vershik_oracle},
      {10, "condition checkers", 0, condition_checkers},
      {11, "parser corpus", 0, parser_corpus},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) out.require(false, "took " + fmt(secs) + " s, limit " + fmt(c.limit_s) + " s");
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": "
              << (out.pass ? out.detail : out.failure) << " (" << fmt(secs) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
