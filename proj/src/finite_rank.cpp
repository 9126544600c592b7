#include "cflab/finite_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cflab {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.source + 1) + "," + e.g.str() + "," + std::to_string(e.target + 1) + ")";
}

void check_level(const RankKSystem& sys, std::size_t n) {
  if (n > sys.horizon())
    throw Error(ErrorKind::out_of_range,
                "level " + std::to_string(n) + " beyond horizon " + std::to_string(sys.horizon()));
}

bool sets_overlap(const GroupSet& a, const GroupSet& b) {
  if (a.is_box() && b.is_box()) return a.as_box()->intersects(*b.as_box());
  auto ba = a.bbox(), bb = b.bbox();
  if (!ba || !bb || !ba->intersects(*bb)) return false;
  return !set_intersection(a, b).empty();
}

}  // namespace

std::optional<MarkedElement> star_product(const MarkedElement& a, const Edge& c) {
  if (a.mark != c.source) return std::nullopt;
  return MarkedElement{a.g + c.g, c.target};
}

std::optional<Edge> compose(const Edge& a, const Edge& b) {
  if (a.target != b.source) return std::nullopt;
  return Edge{a.source, a.g + b.g, b.target};
}

ValidationReport validate_rank_k(const RankKSystem& sys) {
  ValidationReport rep;
  const std::size_t k = sys.rank;
  const GroupElement zero(sys.dim);
  {
    bool ok = sys.F.at(0).size() == k;
    std::string wit;
    for (std::size_t i = 0; ok && i < k; ++i)
      if (!(sys.F[0][i] == GroupSet::singleton(zero))) {
        ok = false;
        wit = "F_0 tower " + std::to_string(i + 1) + " = " + sys.F[0][i].str();
      }
    rep.results.push_back({Condition::I, 0, ok, wit});
  }
  for (std::size_t n = 0; n <= sys.horizon(); ++n) {
    std::string wit;
    for (std::size_t i = 0; i < k && wit.empty(); ++i)
      if (!sys.F[n][i].contains(zero)) wit = "0 not in F_" + std::to_string(n) + " tower " + std::to_string(i + 1);
    if (n >= 1) {
      for (std::size_t i = 0; i < k && wit.empty(); ++i) {
        Edge e{static_cast<int>(i), zero, static_cast<int>(i)};
        if (std::find(sys.C[n].begin(), sys.C[n].end(), e) == sys.C[n].end()) wit = "missing edge " + edge_str(e);
      }
    }
    rep.results.push_back({Condition::V, n, wit.empty(), wit});
    if (n == 0) continue;
    const auto& edges = sys.C[n];
    std::vector<std::size_t> out(k, 0);
    for (const auto& e : edges) {
      if (e.source < 0 || e.target < 0 || static_cast<std::size_t>(e.source) >= k ||
          static_cast<std::size_t>(e.target) >= k)
        throw Error(ErrorKind::invalid_argument, "edge mark out of range at level " + std::to_string(n));
      ++out[e.source];
    }
    std::string w1;
    for (std::size_t i = 0; i < k && w1.empty(); ++i)
      if (out[i] < 2) w1 = "tower " + std::to_string(i + 1) + " has " + std::to_string(out[i]) + " outgoing edges";
    rep.results.push_back({Condition::I, n, w1.empty(), w1});
    std::string w2;
    for (const auto& e : edges)
      if (!sys.F[n - 1][e.source].translate(e.g).subset_of(sys.F[n][e.target])) {
        w2 = "edge " + edge_str(e);
        break;
      }
    rep.results.push_back({Condition::II, n, w2.empty(), w2});
    std::string w3;
    for (std::size_t a = 0; a < edges.size() && w3.empty(); ++a)
      for (std::size_t b = a + 1; b < edges.size() && w3.empty(); ++b) {
        if (edges[a].target != edges[b].target) continue;
        if (edges[a] == edges[b] ||
            sets_overlap(sys.F[n - 1][edges[a].source].translate(edges[a].g),
                         sys.F[n - 1][edges[b].source].translate(edges[b].g)))
          w3 = "(" + edge_str(edges[a]) + "," + edge_str(edges[b]) + ")";
      }
    rep.results.push_back({Condition::III, n, w3.empty(), w3});
  }
  return rep;
}

RMatrix identity_matrix(std::size_t k) {
  RMatrix m(k, std::vector<Int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
  return m;
}

RMatrix r_matrix(const RankKSystem& sys, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::out_of_range, "r_n is defined for n >= 1");
  check_level(sys, n);
  RMatrix r(sys.rank, std::vector<Int>(sys.rank, 0));
  for (const auto& e : sys.C[n]) r[e.source][e.target] += 1;
  return r;
}

RMatrix mat_mul(const RMatrix& a, const RMatrix& b) {
  const std::size_t p = a.size(), q = b.size(), s = b.empty() ? 0 : b[0].size();
  RMatrix c(p, std::vector<Int>(s, 0));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t t = 0; t < q; ++t)
      if (sgn(a[i][t]))
        for (std::size_t j = 0; j < s; ++j) c[i][j] += a[i][t] * b[t][j];
  return c;
}

double projective_diameter(const RMatrix& m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (const auto& row : m)
    for (const auto& x : row)
      if (sgn(x) == 0) return std::numeric_limits<double>::infinity();
  double best = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t a = 0; a < cols; ++a)
        for (std::size_t b = 0; b < cols; ++b) {
          Rational q = make_rational(m[i][a] * m[j][b], m[j][a] * m[i][b]);
          best = std::max(best, std::log(to_double(q)));
        }
  return best;
}

double birkhoff_contraction(const RMatrix& m) {
  double d = projective_diameter(m);
  if (std::isinf(d)) return 1.0;
  return std::tanh(d / 4);
}

CertifiedValue InvariantMeasure::linear(std::size_t level, const std::vector<Rational>& coeff) const {
  if (level > horizon) throw Error(ErrorKind::out_of_range, "measure level beyond solver horizon");
  std::optional<CertifiedValue> out;
  for (const auto& v : vertex[level]) {
    Rational s = 0;
    for (std::size_t i = 0; i < rank; ++i)
      if (sgn(coeff[i])) s += coeff[i] * v[i];
    out = out ? hull(*out, CertifiedValue::point(s)) : CertifiedValue::point(s);
  }
  return *out;
}

CertifiedValue InvariantMeasure::linear(std::size_t level, const std::vector<Int>& coeff) const {
  std::vector<Rational> c(coeff.begin(), coeff.end());
  return linear(level, c);
}

CertifiedValue InvariantMeasure::ratio(std::size_t ln, const std::vector<Rational>& num, std::size_t ld,
                                       const std::vector<Rational>& den) const {
  if (ln > horizon || ld > horizon) throw Error(ErrorKind::out_of_range, "measure level beyond solver horizon");
  std::optional<CertifiedValue> out;
  for (std::size_t v = 0; v < vertices(); ++v) {
    Rational a = 0, b = 0;
    for (std::size_t i = 0; i < rank; ++i) {
      a += num[i] * vertex[ln][v][i];
      b += den[i] * vertex[ld][v][i];
    }
    if (sgn(b) <= 0) throw Error(ErrorKind::inconclusive_depth, "ratio denominator vanishes");
    Rational q = a / b;
    out = out ? hull(*out, CertifiedValue::point(q)) : CertifiedValue::point(q);
  }
  return *out;
}

InvariantMeasure solve_invariant_measure(const RankKSystem& sys, double tolerance, const Rational& normalization) {
  const std::size_t k = sys.rank, M = sys.horizon();
  std::vector<RMatrix> r(M + 1);
  for (std::size_t n = 1; n <= M; ++n) {
    r[n] = r_matrix(sys, n);
    for (std::size_t j = 0; j < k; ++j) {
      Int col = 0;
      for (std::size_t i = 0; i < k; ++i) col += r[n][i][j];
      if (sgn(col) == 0)
        throw Error(ErrorKind::degenerate, "r_" + std::to_string(n) + " has a zero column at tower " +
                                               std::to_string(j + 1));
    }
  }
  std::vector<RMatrix> Q(M + 1);
  Q[M] = identity_matrix(k);
  for (std::size_t n = M; n-- > 0;) Q[n] = mat_mul(r[n + 1], Q[n + 1]);

  InvariantMeasure out;
  out.rank = k;
  out.horizon = M;
  out.normalization = normalization;
  std::vector<Int> total(k, 0);
  for (std::size_t v = 0; v < k; ++v)
    for (std::size_t i = 0; i < k; ++i) total[v] += sys.F[0][i].size() * Q[0][i][v];
  out.vertex.assign(M + 1, std::vector<std::vector<Rational>>(k, std::vector<Rational>(k)));
  out.lambda.assign(M + 1, std::vector<CertifiedValue>(k));
  for (std::size_t n = 0; n <= M; ++n) {
    for (std::size_t v = 0; v < k; ++v)
      for (std::size_t i = 0; i < k; ++i) out.vertex[n][v][i] = make_rational(Q[n][i][v], total[v]) * normalization;
    for (std::size_t i = 0; i < k; ++i) {
      CertifiedValue h = CertifiedValue::point(out.vertex[n][0][i]);
      for (std::size_t v = 1; v < k; ++v) h = hull(h, CertifiedValue::point(out.vertex[n][v][i]));
      out.lambda[n][i] = h;
    }
  }

  // Blocks are built from the innermost stage outwards until strictly positive.
  double bound = std::numeric_limits<double>::infinity();
  bool have_inner = false;
  RMatrix block = identity_matrix(k);
  bool pending = false;
  for (std::size_t n = M; n >= 1; --n) {
    block = pending ? mat_mul(r[n], block) : r[n];
    pending = true;
    double d = projective_diameter(block);
    if (std::isinf(d)) continue;
    if (!have_inner) {
      bound = d;
      have_inner = true;
    } else {
      bound *= std::tanh(d / 4);
    }
    pending = false;
  }
  if (k == 1) bound = 0;
  out.contraction_bound = bound;
  out.diameter = k == 1 ? 0.0 : projective_diameter(Q[0]);
  out.certified = bound < tolerance;
  out.certificate = out.certified ? "certified" : "undecided";
  return out;
}

MarkedCylinder refine_k(const RankKSystem& sys, const MarkedCylinder& cyl, std::size_t to_level) {
  check_level(sys, to_level);
  if (to_level < cyl.level) throw Error(ErrorKind::out_of_range, "refine target below the cylinder level");
  if (cyl.support.size() != sys.rank) throw Error(ErrorKind::invalid_argument, "cylinder needs one set per tower");
  MarkedCylinder cur = cyl;
  for (std::size_t m = cyl.level + 1; m <= to_level; ++m) {
    std::vector<std::vector<GroupElement>> acc(sys.rank);
    for (const auto& e : sys.C[m]) {
      const GroupSet& s = cur.support[e.source];
      if (s.empty()) continue;
      for (const auto& x : s.elements()) acc[e.target].push_back(x + e.g);
    }
    MarkedCylinder next{m, {}};
    for (auto& a : acc) next.support.emplace_back(sys.dim, std::move(a));
    cur = std::move(next);
  }
  return cur;
}

std::vector<Int> cylinder_counts(const MarkedCylinder& cyl) {
  std::vector<Int> c;
  for (const auto& s : cyl.support) c.push_back(s.size());
  return c;
}

CertifiedValue cylinder_measure_k(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& cyl) {
  check_level(sys, cyl.level);
  if (cyl.support.size() != sys.rank) throw Error(ErrorKind::invalid_argument, "cylinder needs one set per tower");
  for (std::size_t i = 0; i < sys.rank; ++i)
    if (!cyl.support[i].subset_of(sys.F[cyl.level][i]))
      throw Error(ErrorKind::invalid_argument, "cylinder support not inside F_" + std::to_string(cyl.level) +
                                                   " tower " + std::to_string(i + 1));
  return lambda.linear(cyl.level, cylinder_counts(cyl));
}

FinitenessTrend check_finiteness_k(const RankKSystem& sys, const InvariantMeasure& lambda) {
  FinitenessTrend t;
  const std::size_t top = std::min(sys.horizon(), lambda.horizon);
  for (std::size_t n = 0; n <= top; ++n) {
    std::vector<Int> sizes;
    for (const auto& f : sys.F[n]) sizes.push_back(f.size());
    t.values.push_back(lambda.linear(n, sizes));
  }
  if (sys.cert.total_measure) {
    t.verdict = Verdict::finite;
    t.reason = "closed-form certificate: " + sys.cert.note;
  } else if (sys.cert.infinite_measure) {
    t.verdict = Verdict::infinite;
    t.reason = "closed-form certificate: " + sys.cert.note;
  } else {
    t.verdict = Verdict::undecided;
    t.reason = "last value " + t.values.back().str();
  }
  return t;
}

std::vector<ActionRatioK> check_ae_action_k(const RankKSystem& sys, const InvariantMeasure& lambda,
                                            const GroupElement& g) {
  Structure s(sys);
  std::vector<ActionRatioK> out;
  const std::size_t top = std::min(sys.horizon(), lambda.horizon);
  for (std::size_t n = 0; n < top; ++n) {
    std::vector<GroupSet> base;
    std::vector<Rational> ref;
    for (const auto& f : sys.F[n]) {
      base.push_back(f.translate(g));
      ref.push_back(Rational(f.size()));
    }
    ChainSet moved(s, n, base, top);
    for (std::size_t m = n + 1; m <= top; ++m) {
      std::vector<Rational> counts;
      for (std::size_t j = 0; j < sys.rank; ++j)
        counts.push_back(Rational(moved.count_in(m, static_cast<int>(j), sys.F[m][j])));
      out.push_back({n, m, lambda.linear(m, counts), lambda.linear(n, ref), lambda.ratio(m, counts, n, ref)});
    }
  }
  return out;
}

CastleView castle_view(const RankKSystem& sys) {
  if (sys.dim != 1) throw Error(ErrorKind::unsupported_shape, "castle view needs G = Z");
  CastleView cv;
  for (std::size_t n = 0; n <= sys.horizon(); ++n) {
    std::vector<Int> h;
    for (std::size_t j = 0; j < sys.rank; ++j) {
      auto b = sys.F[n][j].as_box();
      if (!b || sgn(b->lo[0]) != 0)
        throw Error(ErrorKind::unsupported_shape,
                    "F_" + std::to_string(n) + " tower " + std::to_string(j + 1) + " is not an interval [0,h)");
      h.push_back(b->ext[0]);
    }
    cv.heights.push_back(std::move(h));
  }
  Structure s(sys);
  for (std::size_t n = 1; n <= sys.horizon(); ++n) {
    CastleStage st;
    st.level = n;
    st.heights_below = cv.heights[n - 1];
    st.heights = cv.heights[n];
    for (std::size_t j = 0; j < sys.rank; ++j) {
      CastleTower t;
      t.placements = s.into(n, static_cast<int>(j));
      Int cursor = 0;
      for (std::size_t a = 0; a < t.placements.size(); ++a) {
        const auto& p = t.placements[a];
        Int gap = p.offset[0] - cursor;
        if (sgn(gap) < 0)
          throw Error(ErrorKind::invalid_argument, "overlapping placements in tower " + std::to_string(j + 1) +
                                                       " at level " + std::to_string(n));
        if (a == 0)
          t.bottom = gap;
        else
          t.gaps.push_back(gap);
        cursor = p.offset[0] + st.heights_below[p.source];
      }
      t.gaps.push_back(st.heights[j] - cursor);
      if (t.placements.empty()) t.bottom = st.heights[j], t.gaps.clear();
      st.towers.push_back(std::move(t));
    }
    cv.stages.push_back(std::move(st));
  }
  return cv;
}

bool no_spacers(const CastleStage& st) {
  for (const auto& t : st.towers) {
    if (sgn(t.bottom) != 0) return false;
    for (const auto& g : t.gaps)
      if (sgn(g) != 0) return false;
  }
  return true;
}

SpacerData spacer_data(const RankKSystem& sys, std::size_t n) {
  check_level(sys, n);
  castle_view(sys);  // shape check
  Structure s(sys);
  std::vector<GroupSet> base(sys.rank, GroupSet::singleton(GroupElement(1)));
  ChainSet copies(s, 0, base, n);
  SpacerData d;
  d.level = n;
  d.note = "roof(p) is the gap from p to the next base copy above it in the same tower";
  for (std::size_t j = 0; j < sys.rank; ++j) {
    SpacerTower t;
    for (const auto& p : copies.positions(n, static_cast<int>(j))) t.positions.push_back(p[0]);
    for (std::size_t a = 0; a < t.positions.size(); ++a) {
      if (a + 1 < t.positions.size())
        t.roof.push_back(t.positions[a + 1] - t.positions[a]);
      else
        t.roof.push_back(std::nullopt);
    }
    d.towers.push_back(std::move(t));
  }
  return d;
}

BalancedReport balanced_diagnostics(const RankKSystem& sys, const InvariantMeasure& lambda,
                                    const Rational& threshold) {
  const std::size_t k = sys.rank;
  const std::size_t top = std::min(sys.horizon(), lambda.horizon);
  Structure s(sys);
  std::vector<GroupSet> base;
  for (std::size_t i = 0; i < k; ++i) base.push_back(sys.F[0][i]);
  ChainSet x0(s, 0, base, top);
  BalancedReport rep;
  rep.threshold = threshold;
  std::vector<Rational> ones(k, Rational(1));
  std::optional<CertifiedValue> mn;
  for (std::size_t n = 0; n <= top; ++n) {
    std::vector<CertifiedValue> dl, Ll;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Rational> e(k, Rational(0));
      e[j] = Rational(x0.count(n, static_cast<int>(j)));
      dl.push_back(lambda.linear(n, e));
      std::vector<Rational> u(k, Rational(0));
      u[j] = 1;
      CertifiedValue L = lambda.ratio(n, u, n, ones);
      // the prefix says nothing about the top level
      if (n == top && top > 0) {
        Ll.push_back(L);
        continue;
      }
      if (!mn)
        mn = L;
      else
        mn = CertifiedValue(std::min(mn->lo, L.lo), std::min(mn->hi, L.hi));
      Ll.push_back(L);
    }
    rep.delta.push_back(std::move(dl));
    rep.Lambda.push_back(std::move(Ll));
    std::vector<std::vector<Rational>> cr;
    if (n >= 1) {
      RMatrix r = r_matrix(sys, n);
      cr.assign(k, std::vector<Rational>(k, Rational(0)));
      for (std::size_t l = 0; l < k; ++l) {
        Int col = 0;
        for (std::size_t j = 0; j < k; ++j) col += r[j][l];
        for (std::size_t i = 0; i < k; ++i)
          if (sgn(col)) cr[i][l] = make_rational(r[i][l], col);
      }
    }
    rep.column_ratios.push_back(std::move(cr));
  }
  rep.min_Lambda = *mn;
  rep.balanced = mn->lo >= threshold;
  return rep;
}

RankKSystem telescope_k(const RankKSystem& sys, const std::vector<std::size_t>& cuts) {
  if (cuts.empty() || cuts[0] != 0) throw Error(ErrorKind::invalid_argument, "cuts must start at 0");
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1]) throw Error(ErrorKind::invalid_argument, "cuts must be strictly increasing");
  check_level(sys, cuts.back());
  RankKSystem r;
  r.name = sys.name + "-telescoped";
  r.dim = sys.dim;
  r.rank = sys.rank;
  r.cert = sys.cert;
  r.F.push_back(sys.F[0]);
  r.C.emplace_back();
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    std::vector<Edge> acc = sys.C[cuts[i - 1] + 1];
    for (std::size_t m = cuts[i - 1] + 2; m <= cuts[i]; ++m) {
      std::vector<Edge> next;
      for (const auto& a : acc)
        for (const auto& b : sys.C[m])
          if (auto c = compose(a, b)) next.push_back(*c);
      acc = std::move(next);
    }
    r.C.push_back(std::move(acc));
    r.F.push_back(sys.F[cuts[i]]);
  }
  sort_edges(r);
  return r;
}

}  // namespace cflab
