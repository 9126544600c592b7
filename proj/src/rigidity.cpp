#include "cflab/rigidity.hpp"

#include <algorithm>
#include <iterator>
#include <map>

namespace cflab {

namespace {

MarkedCylinder cell(const RankKSystem& sys, std::size_t level, int tower, const Int& pos) {
  return marked_cells(sys, level, {MarkedElement{GroupElement::scalar(pos), tower}});
}

std::vector<CertifiedValue> tower_masses(const RankKSystem& sys, const InvariantMeasure& lambda, std::size_t n) {
  std::vector<CertifiedValue> out;
  for (std::size_t j = 0; j < sys.rank; ++j) {
    std::vector<Int> c(sys.rank, 0);
    c[j] = sys.F[n][j].size();
    out.push_back(lambda.linear(n, c));
  }
  return out;
}

CertifiedValue min_by_lo(const std::vector<CertifiedValue>& v) {
  CertifiedValue m = v.at(0);
  for (const auto& x : v) m = CertifiedValue(std::min(m.lo, x.lo), std::min(m.hi, x.hi));
  return m;
}

// Drops the horizon level, which the prefix leaves undetermined.
std::vector<CertifiedValue> decided_levels(std::vector<CertifiedValue> v) {
  if (v.size() > 1) v.pop_back();
  return v;
}

bool bounded_trend(const std::vector<Int>& runs) {
  if (runs.size() < 2) return true;
  const std::size_t half = runs.size() / 2;
  Int early = *std::max_element(runs.begin(), runs.begin() + half);
  Int late = *std::max_element(runs.begin() + half, runs.end());
  return late <= early;
}

std::vector<int> order_of(const RankKSystem& sys, const std::vector<int>& tie) {
  if (tie.empty()) {
    std::vector<int> o(sys.rank);
    for (std::size_t i = 0; i < sys.rank; ++i) o[i] = static_cast<int>(i);
    return o;
  }
  std::vector<int> sorted = tie;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted.size() != sys.rank || sorted[i] != static_cast<int>(i))
      throw Error(ErrorKind::invalid_argument, "tie order must be a permutation of the towers");
  return tie;
}

std::string order_str(const std::vector<Placement>& ps) {
  std::string s;
  for (const auto& p : ps) s += (s.empty() ? "" : ",") + std::to_string(p.source + 1);
  return "[" + s + "]";
}

}  // namespace

ExactnessReport exactness_check(const RankKSystem& sys, const InvariantMeasure& lambda, const Rational& threshold) {
  CastleView cv = castle_view(sys);
  ExactnessReport r;
  r.threshold = threshold;
  bool tiles = true;
  for (const auto& st : cv.stages) {
    r.no_spacers.push_back(no_spacers(st));
    tiles = tiles && r.no_spacers.back();
  }
  const std::size_t top = std::min(sys.horizon(), lambda.horizon);
  for (std::size_t n = 0; n <= top; ++n) r.min_tower_mass.push_back(min_by_lo(tower_masses(sys, lambda, n)));
  r.delta = min_by_lo(decided_levels(r.min_tower_mass));
  r.exact = tiles && r.delta.lo > threshold;
  return r;
}

QuasiExactReport quasi_exact_params(const RankKSystem& sys, const InvariantMeasure& lambda, const Rational& threshold) {
  CastleView cv = castle_view(sys);
  QuasiExactReport r;
  r.threshold = threshold;
  for (const auto& st : cv.stages) {
    Int mx = 0;
    for (const auto& t : st.towers) {
      mx = std::max(mx, t.bottom);
      for (const auto& g : t.gaps) mx = std::max(mx, g);
    }
    r.stage_max_gap.push_back(mx);
    r.R = std::max(r.R, mx);
  }
  const std::size_t top = std::min(sys.horizon(), lambda.horizon);
  std::vector<CertifiedValue> mins;
  for (std::size_t n = 0; n <= top; ++n) mins.push_back(min_by_lo(tower_masses(sys, lambda, n)));
  r.delta = min_by_lo(decided_levels(mins));
  r.bounded = bounded_trend(r.stage_max_gap);
  r.quasi_exact = r.bounded && r.delta.lo > threshold;
  return r;
}

std::vector<OrderCheck> co_condition(const RankKSystem& sys) {
  CastleView cv = castle_view(sys);
  std::vector<OrderCheck> out;
  for (const auto& st : cv.stages)
    for (std::size_t j = 0; j < st.towers.size(); ++j) {
      const auto& ps = st.towers[j].placements;
      std::vector<bool> closed(sys.rank, false);
      bool ok = true;
      for (std::size_t a = 0; a < ps.size() && ok; ++a) {
        if (a > 0 && ps[a].source != ps[a - 1].source) closed[ps[a - 1].source] = true;
        if (closed[ps[a].source]) ok = false;
      }
      out.push_back({st.level, j, ok, ok ? "" : order_str(ps)});
    }
  return out;
}

bool all_pass(const std::vector<OrderCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const OrderCheck& c) { return c.pass; });
}

RelaxedOrderReport co_relaxed_condition(const RankKSystem& sys) {
  CastleView cv = castle_view(sys);
  RelaxedOrderReport r;
  for (const auto& st : cv.stages) {
    Int run = 0;
    std::size_t foreign = 0;
    for (const auto& t : st.towers) {
      run = std::max(run, t.bottom);
      for (const auto& g : t.gaps) run = std::max(run, g);
      std::map<int, std::size_t> last;
      for (std::size_t a = 0; a < t.placements.size(); ++a) {
        int src = t.placements[a].source;
        if (auto it = last.find(src); it != last.end()) foreign = std::max(foreign, a - it->second - 1);
        last[src] = a;
      }
    }
    r.stage_R.push_back(run);
    r.stage_L.push_back(foreign);
    r.R = std::max(r.R, run);
    r.L = std::max(r.L, foreign);
  }
  std::vector<Int> ls;
  for (auto x : r.stage_L) ls.push_back(Int(static_cast<unsigned long>(x)));
  r.bounded = bounded_trend(r.stage_R) && bounded_trend(ls);
  return r;
}

std::vector<EntryCheck> nondegeneracy_check(const RankKSystem& sys) {
  std::vector<EntryCheck> out;
  for (std::size_t n = 1; n <= sys.horizon(); ++n) {
    RMatrix r = r_matrix(sys, n);
    for (std::size_t i = 0; i < sys.rank; ++i)
      for (std::size_t j = 0; j < sys.rank; ++j) out.push_back({n, i, j, r[i][j], r[i][j] != 1});
  }
  return out;
}

bool all_pass(const std::vector<EntryCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const EntryCheck& c) { return c.pass; });
}

RigidityFinding find_rigidity_time(const RankKSystem& sys, const InvariantMeasure& lambda, std::size_t n,
                                   std::size_t depth, const RigidityOptions& opt) {
  if (sys.dim != 1) throw Error(ErrorKind::unsupported_shape, "rigidity search needs G = Z");
  if (depth < n + 1) throw Error(ErrorKind::out_of_range, "depth must exceed the stage");
  const std::size_t k = sys.rank;
  const std::vector<int> order = order_of(sys, opt.tie_order);
  QuasiExactReport q = quasi_exact_params(sys, lambda);
  const Int R = q.R;
  TowerModel tm(sys, lambda, depth, opt.policy);
  Structure s(sys);
  const std::vector<Int>& H = tm.heights();

  using PosSet = std::vector<std::vector<Int>>;  // per tower at depth, sorted
  std::vector<PosSet> bases(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<GroupSet> base(k, GroupSet(1));
    base[j] = GroupSet::singleton(GroupElement(1));
    ChainSet cs(s, n, base, depth);
    bases[j].resize(k);
    for (std::size_t t = 0; t < k; ++t)
      for (const auto& p : cs.positions(depth, static_cast<int>(t))) bases[j][t].push_back(p[0]);
  }
  auto mass = [&](const PosSet& ps) {
    TowerCounts c{depth, {}, {}};
    for (const auto& v : ps) c.lo.push_back(Int(static_cast<unsigned long>(v.size())));
    c.hi = c.lo;
    return tm.value(c).lo;
  };
  auto shifted_meet = [&](const PosSet& cur, const Int& shift, const PosSet& target) {
    PosSet out(k);
    for (std::size_t t = 0; t < k; ++t) {
      std::vector<Int> moved;
      for (const auto& p : cur[t]) {
        Int x = p + shift;
        if (tm.wraps()) {
          mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), H[t].get_mpz_t());
        } else if (x >= H[t]) {
          continue;
        }
        moved.push_back(x);
      }
      std::sort(moved.begin(), moved.end());
      std::set_intersection(moved.begin(), moved.end(), target[t].begin(), target[t].end(),
                            std::back_inserter(out[t]));
    }
    return out;
  };

  RigidityFinding f;
  f.stage = n;
  Int kk = 1;
  for (std::size_t i = 0; i < k; ++i) kk *= static_cast<unsigned long>(k);
  f.guarantee = make_rational(1, kk);

  std::vector<CertifiedValue> base_mass;
  for (std::size_t j = 0; j < k; ++j) base_mass.push_back(lambda.linear(n, [&] {
    std::vector<Int> c(k, 0);
    c[j] = 1;
    return c;
  }()));
  int j0 = order[0];
  for (int j : order)
    if (base_mass[j].lo > base_mass[j0].lo) j0 = j;
  f.chain.push_back(j0);
  PosSet cur = bases[j0];
  while (true) {
    const int jt = f.chain.back();
    std::optional<Rational> best;
    int bj = order[0];
    Int bshift;
    PosSet bset;
    for (int j : order)
      for (Int r = 0; r <= R; ++r) {
        Int shift = sys.F[n][jt].size() + r;
        PosSet meet = shifted_meet(cur, shift, bases[j]);
        Rational m = mass(meet);
        if (!best || m > *best) {
          best = m;
          bj = j;
          bshift = shift;
          bset = std::move(meet);
        }
      }
    f.steps.push_back(bshift);
    const auto seen = static_cast<std::size_t>(std::find(f.chain.begin(), f.chain.end(), bj) - f.chain.begin());
    f.chain.push_back(bj);
    if (seen + 1 < f.chain.size()) {
      f.a = seen;
      f.b = f.chain.size() - 1;
      break;
    }
    if (f.chain.size() > k + 1) throw Error(ErrorKind::precondition, "greedy chain found no repeat");
    cur = std::move(bset);
  }
  f.tower = f.chain[f.a];
  Int m = 0;
  for (std::size_t t = f.a; t < f.b; ++t) m += f.steps[t];
  MarkedCylinder B = cell(sys, n, f.tower, 0);
  const Int scan = sgn(R) == 0 ? Int(0) : Int(static_cast<unsigned long>(k)) * (R + 1);
  std::optional<CertifiedValue> best;
  for (Int s = 0; s <= scan; ++s) {
    CertifiedValue r = tm.ratio(tm.window_counts(B, B, Box::point(GroupElement::scalar(m + s))), tm.cylinder_counts(B));
    if (!best || r.lo > best->lo) {
      best = r;
      f.time = m + s;
      f.scan_offset = s;
    }
  }
  f.ratio = *best;
  f.guarantee_met = f.ratio.lo >= f.guarantee;
  if (sgn(R) == 0 && !f.guarantee_met && f.ratio.hi >= f.guarantee)
    throw Error(ErrorKind::inconclusive_depth, "rigidity ratio interval " + f.ratio.str() +
                                                   " straddles the guarantee; increase depth");
  return f;
}

std::vector<CoRigidityFinding> co_rigidity_times(const RankKSystem& sys, const InvariantMeasure& lambda,
                                                 std::size_t castle_level, std::size_t last_stage,
                                                 std::size_t depth) {
  if (!all_pass(co_condition(sys))) throw Error(ErrorKind::precondition, "CO condition fails");
  if (!all_pass(nondegeneracy_check(sys))) throw Error(ErrorKind::precondition, "nondegeneracy fails");
  if (last_stage > depth) throw Error(ErrorKind::out_of_range, "last stage beyond depth");
  TowerModel tm(sys, lambda, depth, EscapePolicy::wrap_if_certified);
  std::vector<CoRigidityFinding> out;
  for (std::size_t m = castle_level + 1; m <= last_stage; ++m) {
    auto masses = tower_masses(sys, lambda, m);
    CoRigidityFinding f;
    f.stage = m;
    f.heavy_tower = 0;
    for (std::size_t j = 1; j < sys.rank; ++j)
      if (masses[j].lo > masses[f.heavy_tower].lo) f.heavy_tower = static_cast<int>(j);
    f.heavy_mass = masses[f.heavy_tower];
    f.time = sys.F[m][f.heavy_tower].size();
    for (std::size_t i = 0; i < sys.rank; ++i)
      for (Int p = 0; p < sys.F[castle_level][i].size(); ++p) {
        MarkedCylinder I = cell(sys, castle_level, static_cast<int>(i), p);
        f.ratios.push_back(tm.ratio(tm.window_counts(I, I, Box::point(GroupElement::scalar(f.time))),
                                    tm.cylinder_counts(I)));
      }
    f.min_ratio = min_by_lo(f.ratios);
    out.push_back(std::move(f));
  }
  return out;
}

PartialRigidityEstimate partial_rigidity_estimate(const RankKSystem& sys, const InvariantMeasure& lambda,
                                                  const std::vector<Int>& times, std::size_t castle_level,
                                                  std::size_t depth, EscapePolicy policy) {
  if (times.empty()) throw Error(ErrorKind::invalid_argument, "no times supplied");
  TowerModel tm(sys, lambda, depth, policy);
  PartialRigidityEstimate est;
  std::optional<Rational> eta;
  for (std::size_t i = 0; i < sys.rank; ++i)
    for (Int p = 0; p < sys.F.at(castle_level)[i].size(); ++p) {
      MarkedCylinder J = cell(sys, castle_level, static_cast<int>(i), p);
      std::vector<CertifiedValue> row;
      for (const auto& t : times) {
        CertifiedValue r = tm.ratio(tm.window_counts(J, J, Box::point(GroupElement::scalar(t))), tm.cylinder_counts(J));
        eta = eta ? std::min(*eta, r.lo) : r.lo;
        row.push_back(r);
      }
      est.table.push_back(std::move(row));
      est.levels.emplace_back(static_cast<int>(i), p);
    }
  est.eta = *eta;
  return est;
}

}  // namespace cflab
