#include "cflab/dynamics.hpp"

#include <algorithm>

namespace cflab {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

MarkedCylinder marked(const Cylinder& c) { return as_marked(c); }

}  // namespace

bool spacer_free_beyond(const RankKSystem& sys, std::size_t depth) {
  if (!sys.cert.spacer_free_tail) return false;
  for (std::size_t n = depth + 1; n <= sys.horizon(); ++n)
    for (std::size_t j = 0; j < sys.rank; ++j) {
      Int covered = 0;
      for (const auto& e : sys.C[n])
        if (static_cast<std::size_t>(e.target) == j) covered += sys.F[n - 1][e.source].size();
      if (covered != sys.F[n][j].size()) return false;
    }
  return true;
}

TowerModel::TowerModel(const RankKSystem& sys, const InvariantMeasure& lambda, std::size_t depth, EscapePolicy policy)
    : sys_(sys), lambda_(&lambda), depth_(depth), s_(sys) {
  if (depth > sys.horizon())
    throw Error(ErrorKind::out_of_range,
                "depth " + std::to_string(depth) + " beyond horizon " + std::to_string(sys.horizon()));
  if (depth > lambda.horizon)
    throw Error(ErrorKind::out_of_range, "depth " + std::to_string(depth) + " beyond the measure horizon");
  for (std::size_t j = 0; j < sys.rank; ++j) {
    auto b = sys.F[depth][j].as_box();
    if (!b) throw Error(ErrorKind::unsupported_shape, "tower model needs box-shaped F_L");
    frames_.push_back(*b);
    heights_.push_back(b->size());
  }
  wrap_ = policy == EscapePolicy::wrap_if_certified && sys.rank == 1 && sys.dim == 1 &&
          spacer_free_beyond(sys, depth);
}

TowerCounts TowerModel::cylinder_counts(const MarkedCylinder& a) const {
  if (a.level > depth_) throw Error(ErrorKind::out_of_range, "cylinder level beyond depth");
  TowerCounts t{a.level, {}, {}};
  for (const auto& s : a.support) t.lo.push_back(s.size());
  t.hi = t.lo;
  return t;
}

TowerCounts TowerModel::window_counts(const MarkedCylinder& a, const MarkedCylinder& b, const Box& window) const {
  if (a.level > depth_ || b.level > depth_) throw Error(ErrorKind::out_of_range, "cylinder level beyond depth");
  if (window.dim() != sys_.dim) throw Error(ErrorKind::dimension_mismatch, "window dimension mismatch");
  const std::size_t n0 = std::max(a.level, b.level);
  MarkedCylinder ra = refine_k(sys_, a, n0), rb = refine_k(sys_, b, n0);
  ChainSet ca(s_, n0, ra.support, depth_), cb(s_, n0, rb.support, depth_);
  TowerCounts t{depth_, {}, {}};
  const Int wsize = window.size();
  for (std::size_t j = 0; j < sys_.rank; ++j) {
    const int u = static_cast<int>(j);
    Int pairs = 0, escape = 0;
    if (window.empty()) {
    } else if (wrap_) {
      const Int& h = heights_[j];
      const Int wl = window.last()[0];
      Int zlo = floor_div(-h - wl, h), zhi = floor_div(h - window.lo[0], h) + 1;
      for (Int z = zlo; z <= zhi; ++z) {
        Box shifted = window.translate(GroupElement::scalar(z * h));
        if (shifted.last()[0] <= -h || shifted.lo[0] >= h) continue;
        pairs += pair_count(ca, cb, depth_, u, shifted);
      }
    } else {
      pairs = pair_count(ca, cb, depth_, u, window);
      escape = wsize * cb.count(depth_, u) - window_overlap_sum(cb, depth_, u, window, frames_[j]);
    }
    t.lo.push_back(pairs);
    t.hi.push_back(pairs + escape);
  }
  return t;
}

CertifiedValue TowerModel::value(const TowerCounts& c) const {
  std::vector<Rational> lo(c.lo.begin(), c.lo.end()), hi(c.hi.begin(), c.hi.end());
  CertifiedValue a = lambda_->linear(c.level, lo), b = lambda_->linear(c.level, hi);
  return CertifiedValue(a.lo, b.hi);
}

CertifiedValue TowerModel::ratio(const TowerCounts& num, const TowerCounts& den) const {
  const auto& vx = lambda_->vertex;
  std::optional<Rational> lo, hi;
  for (std::size_t v = 0; v < lambda_->vertices(); ++v) {
    auto eval = [&](const TowerCounts& c, const std::vector<Int>& counts) {
      Rational s = 0;
      for (std::size_t i = 0; i < counts.size(); ++i) s += Rational(counts[i]) * vx[c.level][v][i];
      return s;
    };
    Rational nl = eval(num, num.lo), nh = eval(num, num.hi), dl = eval(den, den.lo), dh = eval(den, den.hi);
    if (sgn(dl) <= 0) throw Error(ErrorKind::inconclusive_depth, "denominator interval reaches 0; increase depth");
    Rational a = nl / dh, b = nh / dl;
    lo = lo ? std::min(*lo, a) : a;
    hi = hi ? std::max(*hi, b) : b;
  }
  return CertifiedValue(*lo, *hi);
}

CertifiedValue TowerModel::correlation(const MarkedCylinder& a, const MarkedCylinder& b, const GroupElement& g) const {
  if (sys_.dim == 1 && sgn(g[0]) < 0) return correlation(b, a, -g);
  return window_sum(a, b, Box::point(g));
}

CertifiedValue correlation(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                           const MarkedCylinder& b, const GroupElement& g, std::size_t depth, EscapePolicy policy) {
  TowerModel tm(sys, lambda, depth, policy);
  return tm.correlation(a, b, g);
}

std::vector<CertifiedValue> correlation_table(const RankKSystem& sys, const InvariantMeasure& lambda,
                                              const MarkedCylinder& a, const MarkedCylinder& b,
                                              const std::vector<GroupElement>& shifts, std::size_t depth,
                                              EscapePolicy policy) {
  TowerModel tm(sys, lambda, depth, policy);
  std::vector<CertifiedValue> out;
  for (const auto& g : shifts) out.push_back(tm.correlation(a, b, g));
  return out;
}

Cylinder base_cylinder(const RankOneSystem& sys) { return Cylinder{0, sys.F.at(0)}; }

bool inside_base(const RankKSystem& sys, const MarkedCylinder& a) {
  Structure s(sys);
  std::vector<GroupSet> base;
  for (const auto& f : sys.F.at(0)) base.push_back(f);
  ChainSet x0(s, 0, base, a.level);
  for (std::size_t j = 0; j < sys.rank; ++j) {
    const GroupSet& sup = a.support[j];
    if (sup.empty()) continue;
    if (x0.count(a.level, static_cast<int>(j)) < sup.size()) return false;
    Int inside = 0;
    for (const auto& p : x0.positions(a.level, static_cast<int>(j)))
      if (sup.contains(p)) inside += 1;
    if (inside != sup.size()) return false;
  }
  return true;
}

InvariantMeasure rank_one_measure(const RankOneSystem& sys, std::size_t horizon) {
  RankKSystem k = as_rank_k(sys);
  if (horizon < k.horizon()) {
    k.F.resize(horizon + 1);
    k.C.resize(horizon + 1);
  }
  return solve_invariant_measure(k);
}

namespace {

CorrelationReport wre_core(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                           const MarkedCylinder& b, const Box& window, std::size_t depth, EscapePolicy policy) {
  if (!inside_base(sys, a) || !inside_base(sys, b))
    throw Error(ErrorKind::precondition, "A and B must lie inside X_0 = [F_0]_0");
  TowerModel tm(sys, lambda, depth, policy);
  MarkedCylinder x0 = base_cylinder(sys);
  CorrelationReport r;
  r.depth = depth;
  r.window = window;
  r.mu_a = tm.measure(a);
  r.mu_b = tm.measure(b);
  TowerCounts num = tm.window_counts(a, b, window);
  TowerCounts den = tm.window_counts(x0, x0, window);
  r.numerator = tm.value(num);
  r.denominator = tm.value(den);
  r.ratio = tm.ratio(num, den);
  r.target = mul_nonneg(r.mu_a, r.mu_b);
  return r;
}

}  // namespace

CorrelationReport wre_ratio_rank_one(const RankOneSystem& sys, const Cylinder& a, const Cylinder& b, std::size_t l,
                                     std::size_t depth, EscapePolicy policy) {
  if (sys.dim != 1) throw Error(ErrorKind::unsupported_shape, "wre ratio needs G = Z");
  if (l > depth) throw Error(ErrorKind::out_of_range, "l must not exceed the depth");
  auto fl = sys.F.at(l).as_box();
  if (!fl) throw Error(ErrorKind::unsupported_shape, "wre ratio needs interval F_l");
  InvariantMeasure lambda = rank_one_measure(sys, sys.horizon());
  return wre_core(as_rank_k(sys), lambda, marked(a), marked(b), Box::interval(0, fl->size()), depth, policy);
}

CorrelationReport wre_ratio_rank_k(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                                   const MarkedCylinder& b, std::size_t l, std::size_t depth, EscapePolicy policy) {
  if (sys.dim != 1) throw Error(ErrorKind::unsupported_shape, "wre ratio needs G = Z");
  if (l > depth) throw Error(ErrorKind::out_of_range, "l must not exceed the depth");
  Int hl = sys.F.at(l).at(0).size();
  for (const auto& f : sys.F[l]) hl = std::min(hl, f.size());
  return wre_core(sys, lambda, a, b, Box::interval(0, hl), depth, policy);
}

CertifiedValue a_n(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& y, const Box& window,
                   std::size_t depth, EscapePolicy policy) {
  TowerModel tm(sys, lambda, depth, policy);
  CertifiedValue mu = tm.measure(y);
  if (sgn(mu.hi) == 0) throw Error(ErrorKind::invalid_argument, "a_n needs mu(Y) > 0");
  return div_nonneg(tm.window_sum(y, y, window), mul_nonneg(mu, mu));
}

BoundCheck bound_check_rank_one(const RankOneSystem& sys, const Cylinder& a, const Cylinder& b, std::size_t l,
                                std::size_t depth, double tolerance) {
  CorrelationReport r = wre_ratio_rank_one(sys, a, b, l, depth);
  BoundCheck c;
  c.ratio = r.ratio;
  c.bound = 2 * std::min(r.mu_a.lo, r.mu_b.lo);
  c.pass = to_double(c.ratio.hi - c.bound) <= tolerance;
  return c;
}

BoundCheck bound_check_rank_k(const RankKSystem& sys, const InvariantMeasure& lambda, const MarkedCylinder& a,
                              const MarkedCylinder& b, std::size_t l, std::size_t depth, double tolerance) {
  CorrelationReport r = wre_ratio_rank_k(sys, lambda, a, b, l, depth);
  BalancedReport bal = balanced_diagnostics(sys, lambda);
  const auto& delta = bal.delta.at(std::min(depth, bal.delta.size() - 1));
  Rational dmin = delta[0].hi;
  for (const auto& d : delta) dmin = std::min(dmin, d.hi);
  if (sgn(dmin) <= 0) throw Error(ErrorKind::inconclusive_depth, "delta estimate is not positive");
  BoundCheck c;
  c.ratio = r.ratio;
  c.bound = 4 * Rational(static_cast<unsigned long>(sys.rank)) * std::min(r.mu_a.lo, r.mu_b.lo) / dmin;
  c.pass = to_double(c.ratio.hi - c.bound) <= tolerance;
  return c;
}

CorrelationReport abelian_window_sums(const RankOneSystem& sys, const Cylinder& a, const Cylinder& b, std::size_t n,
                                      std::size_t depth) {
  if (n > depth) throw Error(ErrorKind::out_of_range, "n must not exceed the depth");
  auto fn = sys.F.at(n).as_box();
  if (!fn) throw Error(ErrorKind::unsupported_shape, "window sums need a box F_n");
  InvariantMeasure lambda = rank_one_measure(sys, sys.horizon());
  RankKSystem k = as_rank_k(sys);
  CorrelationReport r =
      wre_core(k, lambda, marked(a), marked(b), box_difference(*fn, *fn), depth, EscapePolicy::charge);
  bool holes = true;
  for (std::size_t m = 0; m < depth && holes; ++m) holes = large_holes_check(sys, GroupElement(sys.dim), m).pass;
  if (holes) {
    r.denominator_expected = c_product(sys, n);
    r.denominator_identity = r.denominator.lo == Rational(r.denominator_expected) && r.denominator.contains(Rational(r.denominator_expected));
  }
  return r;
}

}  // namespace cflab
