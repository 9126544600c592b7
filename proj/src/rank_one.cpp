#include "cflab/rank_one.hpp"

#include "cflab/chain.hpp"

#include <algorithm>

namespace cflab {

const char* to_string(Condition c) {
  switch (c) {
    case Condition::I: return "I";
    case Condition::II: return "II";
    case Condition::III: return "III";
    case Condition::IV: return "IV";
    case Condition::V: return "V";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::finite: return "finite";
    case Verdict::infinite: return "infinite";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

bool ValidationReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const ConditionResult& r) { return r.pass; });
}

const ConditionResult* ValidationReport::first_failure() const {
  for (const auto& r : results)
    if (!r.pass) return &r;
  return nullptr;
}

const ConditionResult* ValidationReport::find(Condition c, std::size_t level) const {
  for (const auto& r : results)
    if (r.condition == c && r.level == level) return &r;
  return nullptr;
}

namespace {

void check_level(const RankOneSystem& sys, std::size_t n) {
  if (n > sys.horizon())
    throw Error(ErrorKind::out_of_range,
                "level " + std::to_string(n) + " beyond horizon " + std::to_string(sys.horizon()));
}

}  // namespace

ValidationReport validate(const RankOneSystem& sys) {
  ValidationReport rep;
  const std::size_t N = sys.horizon();
  const GroupElement zero(sys.dim);
  {
    bool ok = sys.F.at(0) == GroupSet::singleton(zero);
    rep.results.push_back({Condition::I, 0, ok, ok ? "" : "F_0 = " + sys.F[0].str()});
  }
  for (std::size_t n = 0; n <= N; ++n) {
    if (n >= 1) {
      const GroupSet& c = sys.C.at(n);
      bool ok = c.size() > 1;
      rep.results.push_back({Condition::I, n, ok, ok ? "" : "#C_" + std::to_string(n) + " = " + c.size().get_str()});
      const GroupSet& fp = sys.F[n - 1];
      std::string wit;
      for (const auto& x : c.elements()) {
        if (!fp.translate(x).subset_of(sys.F[n])) {
          wit = "c = " + x.str();
          break;
        }
      }
      rep.results.push_back({Condition::II, n, wit.empty(), wit});
      auto dt = disjoint_translates(fp, c);
      rep.results.push_back({Condition::III, n, dt.disjoint,
                             dt.disjoint ? "" : "(" + dt.witness->first.str() + "," + dt.witness->second.str() + ")"});
      bool zc = c.contains(zero);
      rep.results.push_back({Condition::IV, n, zc && sys.F[n].contains(zero),
                             zc ? (sys.F[n].contains(zero) ? "" : "0 not in F_" + std::to_string(n))
                                : "0 not in C_" + std::to_string(n)});
    } else {
      bool zf = sys.F[0].contains(zero);
      rep.results.push_back({Condition::IV, 0, zf, zf ? "" : "0 not in F_0"});
    }
  }
  return rep;
}

Int c_product(const RankOneSystem& sys, std::size_t n) {
  check_level(sys, n);
  Int p = 1;
  for (std::size_t i = 1; i <= n; ++i) p *= sys.C[i].size();
  return p;
}

Rational measure(const RankOneSystem& sys, const Cylinder& cyl) {
  check_level(sys, cyl.level);
  if (!cyl.support.subset_of(sys.F[cyl.level]))
    throw Error(ErrorKind::invalid_argument, "cylinder support not inside F_" + std::to_string(cyl.level));
  return make_rational(cyl.support.size(), c_product(sys, cyl.level));
}

Cylinder refine(const RankOneSystem& sys, const Cylinder& cyl, std::size_t to_level) {
  check_level(sys, to_level);
  if (to_level < cyl.level) throw Error(ErrorKind::out_of_range, "refine target below the cylinder level");
  Cylinder r = cyl;
  for (std::size_t m = cyl.level + 1; m <= to_level; ++m) r.support = sumset(r.support, sys.C[m]);
  r.level = to_level;
  return r;
}

MeasureTrend total_measure_trend(const RankOneSystem& sys, const std::optional<Rational>& user_bound) {
  MeasureTrend t;
  Int prod = 1;
  for (std::size_t n = 0; n <= sys.horizon(); ++n) {
    if (n) prod *= sys.C[n].size();
    t.values.push_back(make_rational(sys.F[n].size(), prod));
  }
  if (sys.cert.total_measure) {
    t.verdict = Verdict::finite;
    t.limit = sys.cert.total_measure;
    t.reason = "closed-form certificate: " + sys.cert.note;
  } else if (sys.cert.infinite_measure) {
    t.verdict = Verdict::infinite;
    t.reason = "closed-form certificate: " + sys.cert.note;
  } else if (user_bound && std::all_of(t.values.begin(), t.values.end(),
                                       [&](const Rational& v) { return v <= *user_bound; })) {
    t.verdict = Verdict::finite;
    t.limit = std::nullopt;
    t.reason = "bounded by supplied bound " + to_string(*user_bound);
  } else {
    t.verdict = Verdict::undecided;
    t.reason = "last value " + to_string(t.values.back());
  }
  return t;
}

std::vector<std::optional<std::size_t>> check_full_action(const RankOneSystem& sys, const GroupElement& g) {
  RankKSystem k = as_rank_k(sys);
  Structure s(k);
  std::vector<std::optional<std::size_t>> out;
  for (std::size_t n = 0; n <= sys.horizon(); ++n) {
    ChainSet moved(s, n, {sys.F[n].translate(g)}, sys.horizon());
    std::optional<std::size_t> found;
    for (std::size_t m = n; m <= sys.horizon() && !found; ++m)
      if (moved.count_in(m, 0, sys.F[m]) == moved.count(m, 0)) found = m;
    out.push_back(found);
  }
  return out;
}

std::vector<ActionRatio> check_ae_action(const RankOneSystem& sys, const GroupElement& g, std::size_t n) {
  check_level(sys, n);
  RankKSystem k = as_rank_k(sys);
  Structure s(k);
  ChainSet moved(s, n, {sys.F[n].translate(g)}, sys.horizon());
  std::vector<ActionRatio> out;
  for (std::size_t m = n + 1; m <= sys.horizon(); ++m)
    out.push_back({n, m, make_rational(moved.count_in(m, 0, sys.F[m]), moved.count(m, 0))});
  return out;
}

std::vector<ActionRatio> check_ae_action(const RankOneSystem& sys, const GroupElement& g) {
  std::vector<ActionRatio> out;
  for (std::size_t n = 0; n < sys.horizon(); ++n) {
    auto part = check_ae_action(sys, g, n);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

ExpansionResult return_expansions(const RankOneSystem& sys, const GroupElement& g, const GroupElement& a,
                                  const GroupElement& b, std::size_t n, std::size_t depth) {
  check_level(sys, depth);
  if (n >= depth) throw Error(ErrorKind::out_of_range, "return_expansions needs n < L");
  if (!sys.F[n].contains(a) || !sys.F[n].contains(b))
    throw Error(ErrorKind::invalid_argument, "a and b must lie in F_" + std::to_string(n));
  ExpansionResult res;
  const GroupElement t = g + a - b;
  if (t.is_zero()) {
    res.empty_product = true;
    res.value = CertifiedValue::point(make_rational(1, c_product(sys, n)));
    return res;
  }
  // reach[i] bounds sum_{n<l<=i} (c_l - d_l).
  std::vector<Box> reach(depth + 1);
  reach[n] = Box::point(GroupElement(sys.dim));
  Box dbox = Box::point(GroupElement(sys.dim));
  for (std::size_t i = n + 1; i <= depth; ++i) {
    dbox = box_sum(dbox, *sys.C[i].bbox());
    reach[i] = box_difference(dbox, dbox);
  }
  Rational lo = 0;
  std::vector<GroupElement> cs, ds;
  for (std::size_t j = n + 1; j <= depth; ++j) {
    const Rational cell = make_rational(1, c_product(sys, j));
    cs.assign(j - n, GroupElement(sys.dim));
    ds.assign(j - n, GroupElement(sys.dim));
    auto rec = [&](auto&& self, std::size_t i, const GroupElement& rest) -> void {
      if (i == n) {
        if (rest.is_zero()) {
          res.expansions.push_back(Expansion{j, cs, ds});
          lo += cell;
        }
        return;
      }
      const auto& digits = sys.C[i].elements();
      for (const auto& c : digits)
        for (const auto& d : digits) {
          if (i == j && c == d) continue;
          GroupElement r = rest - (c - d);
          if (!reach[i - 1].contains(r)) continue;
          cs[i - n - 1] = c;
          ds[i - n - 1] = d;
          self(self, i - 1, r);
        }
    };
    rec(rec, j, t);
  }
  RankKSystem k = as_rank_k(sys);
  Structure s(k);
  ChainSet moved(s, n, {GroupSet::singleton(a + g)}, depth);
  Int unresolved = moved.count(depth, 0) - moved.count_in(depth, 0, sys.F[depth]);
  res.value = CertifiedValue(lo, lo + make_rational(unresolved, c_product(sys, depth)));
  return res;
}

RankOneSystem telescope(const RankOneSystem& sys, const std::vector<std::size_t>& cuts) {
  if (cuts.empty() || cuts[0] != 0) throw Error(ErrorKind::invalid_argument, "cuts must start at 0");
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1]) throw Error(ErrorKind::invalid_argument, "cuts must be strictly increasing");
  check_level(sys, cuts.back());
  RankOneSystem r;
  r.name = sys.name + "-telescoped";
  r.dim = sys.dim;
  r.cert = sys.cert;
  r.F.push_back(sys.F[0]);
  r.C.push_back(GroupSet(sys.dim));
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    GroupSet c = sys.C[cuts[i - 1] + 1];
    for (std::size_t m = cuts[i - 1] + 2; m <= cuts[i]; ++m) c = sumset(c, sys.C[m]);
    r.C.push_back(c);
    r.F.push_back(sys.F[cuts[i]]);
  }
  return r;
}

ThinResult thin(const RankOneSystem& sys, const std::vector<GroupElement>& generators,
                std::function<Rational(std::size_t)> threshold) {
  if (!threshold)
    threshold = [](std::size_t n) -> Rational {
      if (n == 0) return Rational(-1);
      return 1 - make_rational(1, Int(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n));
    };
  ThinResult out;
  out.system = sys;
  out.system.name = sys.name + "-thinned";
  out.system.grow = nullptr;
  out.densities.assign(sys.horizon() + 1, Rational(1));
  out.meets_threshold.assign(sys.horizon() + 1, true);
  out.note = "density threshold read as 1 - n^-2 (summable deficiencies); reported, not enforced";
  for (std::size_t n = 0; n < sys.horizon(); ++n) {
    const std::size_t used = std::min(generators.size(), n);
    std::vector<GroupElement> kept;
    for (const auto& c : sys.C[n + 1].elements()) {
      bool ok = true;
      for (std::size_t j = 0; j < used && ok; ++j)
        ok = sys.F[n].translate(generators[j] + c).subset_of(sys.F[n + 1]);
      if (ok) kept.push_back(c);
    }
    if (kept.empty())
      throw Error(ErrorKind::thinning_failed, "thinned C_" + std::to_string(n + 1) + " is empty (n = " +
                                                  std::to_string(n) + ")");
    GroupSet thinned(sys.dim, std::move(kept));
    out.densities[n + 1] = make_rational(thinned.size(), sys.C[n + 1].size());
    out.meets_threshold[n + 1] = out.densities[n + 1] > threshold(n);
    out.system.C[n + 1] = std::move(thinned);
  }
  return out;
}

HolesResult large_holes_check(const RankOneSystem& sys, const GroupElement& g, std::size_t n) {
  if (n >= sys.horizon()) throw Error(ErrorKind::out_of_range, "large_holes_check needs n < N");
  const GroupSet& f = sys.F[n];
  std::optional<Box> window;
  std::optional<GroupSet> explicit_window;
  if (f.is_box()) {
    Box d = box_difference(*f.as_box(), *f.as_box());
    window = box_sum(d, d).translate(g);
  } else {
    GroupSet d = diffset(f, f);
    explicit_window = sumset(d, d).translate(g);
  }
  HolesResult r;
  const GroupSet deltas = diffset(sys.C[n + 1], sys.C[n + 1]);
  for (const auto& delta : deltas.elements()) {
    if (delta.is_zero()) continue;
    bool hit = window ? window->contains(delta) : explicit_window->contains(delta);
    if (hit) {
      r.pass = false;
      r.witness = delta;
      return r;
    }
  }
  return r;
}

std::vector<Int> convolution_window_counts(const RankOneSystem& sys, std::size_t l, std::size_t n, std::size_t depth,
                                           const std::vector<GroupElement>& shifts) {
  if (!(l < n && n <= depth)) throw Error(ErrorKind::out_of_range, "need l < n <= L");
  check_level(sys, depth);
  auto fn = sys.F[n].as_box();
  auto fl = sys.F[l].as_box();
  if (!fn || !fl) throw Error(ErrorKind::unsupported_shape, "window counts need box-shaped F_n and F_l");
  const Box base_window = box_difference(*fn, *fn);
  const Box allowed = box_difference(*fl, *fl);
  RankKSystem k = as_rank_k(sys);
  Structure s(k);
  ChainSet dset(s, l, {GroupSet::singleton(GroupElement(sys.dim))}, depth);
  std::vector<Int> out;
  for (const auto& h : shifts) {
    if (!allowed.contains(h)) throw Error(ErrorKind::invalid_argument, "shift " + h.str() + " outside F_l - F_l");
    out.push_back(pair_count(dset, dset, depth, 0, base_window.translate(h)));
  }
  return out;
}

namespace {

void append_cut_stage(RankOneSystem& sys, const CutStage& st) {
  if (st.cuts < 2) throw Error(ErrorKind::invalid_argument, "cut-and-stack needs at least 2 cuts");
  if (st.spacers.size() != st.cuts)
    throw Error(ErrorKind::invalid_argument, "spacer list size " + std::to_string(st.spacers.size()) +
                                                 " does not match cuts " + std::to_string(st.cuts));
  const Int h = sys.F.back().size();
  std::vector<GroupElement> offs;
  Int pos = 0;
  for (std::size_t i = 0; i < st.cuts; ++i) {
    if (sgn(st.spacers[i]) < 0 || sgn(st.top) < 0) throw Error(ErrorKind::invalid_argument, "negative spacer count");
    offs.push_back(GroupElement::scalar(pos));
    pos += h + st.spacers[i];
  }
  sys.C.push_back(GroupSet(1, std::move(offs)));
  sys.F.push_back(GroupSet::interval(0, pos + st.top));
}

}  // namespace

RankOneSystem build_cut_and_stack(const std::vector<CutStage>& stages) {
  RankOneSystem sys;
  sys.name = "cut-and-stack";
  sys.F.push_back(GroupSet::interval(0, 1));
  sys.C.push_back(GroupSet(1));
  for (const auto& st : stages) append_cut_stage(sys, st);
  return sys;
}

RankOneSystem build_cut_and_stack(std::size_t horizon, std::function<CutStage(std::size_t, const Int&)> rule) {
  RankOneSystem sys;
  sys.name = "cut-and-stack";
  sys.F.push_back(GroupSet::interval(0, 1));
  sys.C.push_back(GroupSet(1));
  sys.grow = [rule](RankOneSystem& s) { append_cut_stage(s, rule(s.horizon(), s.F.back().size())); };
  extend(sys, horizon);
  return sys;
}

}  // namespace cflab
