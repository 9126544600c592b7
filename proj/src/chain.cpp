#include "cflab/chain.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace cflab {

namespace {

struct MemoKey {
  std::size_t level;
  int u, v;
  std::vector<Int> lo;

  bool operator<(const MemoKey& o) const {
    if (level != o.level) return level < o.level;
    if (u != o.u) return u < o.u;
    if (v != o.v) return v < o.v;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      int c = cmp(lo[i], o.lo[i]);
      if (c) return c < 0;
    }
    return false;
  }
};

Int count_in_box(const GroupSet& s, const Box& b) {
  if (s.empty() || b.empty()) return 0;
  if (s.is_box()) return intersect(*s.as_box(), b).size();
  Int n = 0;
  for (const auto& x : s.elements())
    if (b.contains(x)) n += 1;
  return n;
}

// #{(a, b) in A x B : a - b in I}
Int base_pair_count(const GroupSet& a, const GroupSet& b, const Box& win) {
  if (a.empty() || b.empty() || win.empty()) return 0;
  const std::size_t d = a.dim();
  if (a.is_box() && b.is_box()) {
    Box ab = *a.as_box(), bb = *b.as_box();
    Int prod = 1;
    GroupElement last = win.last();
    for (std::size_t i = 0; i < d; ++i) {
      prod *= overlap_sum_1d(ab.lo[i], ab.ext[i], Int(-last[i]), win.ext[i], bb.lo[i], bb.ext[i]);
      if (sgn(prod) == 0) break;
    }
    return prod;
  }
  Int total = 0;
  if (b.is_box()) {
    Box bb = *b.as_box();
    GroupElement last = win.last();
    for (const auto& x : a.elements()) total += intersect(Box(x - last, win.ext), bb).size();
    return total;
  }
  if (a.is_box()) {
    Box ab = *a.as_box();
    for (const auto& y : b.elements()) total += intersect(win.translate(y), ab).size();
    return total;
  }
  const auto& bs = b.elements();
  GroupElement last = win.last();
  auto first_less = [](const GroupElement& e, const Int& v) { return e[0] < v; };
  auto first_greater = [](const Int& v, const GroupElement& e) { return v < e[0]; };
  for (const auto& x : a.elements()) {
    // b ranges over x - I; restrict by the first coordinate, which orders bs.
    Int lo0 = x[0] - last[0];
    Int hi0 = x[0] - win.lo[0];
    auto from = std::lower_bound(bs.begin(), bs.end(), lo0, first_less);
    auto to = std::upper_bound(from, bs.end(), hi0, first_greater);
    if (d == 1) {
      total += static_cast<unsigned long>(to - from);
      continue;
    }
    for (auto it = from; it != to; ++it)
      if (win.contains(x - *it)) total += 1;
  }
  return total;
}

Int base_overlap_sum(const GroupSet& b, const Box& win, const Box& frame) {
  if (b.empty() || win.empty() || frame.empty()) return 0;
  if (b.is_box()) {
    Box bb = *b.as_box();
    Int prod = 1;
    for (std::size_t i = 0; i < b.dim(); ++i) {
      prod *= overlap_sum_1d(bb.lo[i], bb.ext[i], win.lo[i], win.ext[i], frame.lo[i], frame.ext[i]);
      if (sgn(prod) == 0) break;
    }
    return prod;
  }
  Int total = 0;
  for (const auto& x : b.elements()) total += intersect(win.translate(x), frame).size();
  return total;
}

Int phi(const Int& y, const Int& w, const Int& f0, const Int& f1) {
  Int hi = y + w < f1 ? Int(y + w) : f1;
  Int lo = y > f0 ? y : f0;
  return hi > lo ? Int(hi - lo) : Int(0);
}

}  // namespace

Int overlap_sum_1d(const Int& x0, const Int& n, const Int& a, const Int& w, const Int& f0, const Int& fl) {
  if (sgn(n) <= 0 || sgn(w) <= 0 || sgn(fl) <= 0) return 0;
  const Int y0 = x0 + a, y1 = y0 + n, f1 = f0 + fl;
  std::vector<Int> cuts{y0, y1};
  for (const Int& bp : {Int(f0 - w), f0, Int(f1 - w), f1})
    if (bp > y0 && bp < y1) cuts.push_back(bp);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Int total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Int& s = cuts[i];
    Int e = cuts[i + 1] - 1;
    total += (e - s + 1) * (phi(s, w, f0, f1) + phi(e, w, f0, f1));
  }
  return total / 2;
}

Structure::Structure(const RankKSystem& sys) : dim_(sys.dim), rank_(sys.rank), horizon_(sys.horizon()) {
  into_.assign(horizon_ + 1, std::vector<std::vector<Placement>>(rank_));
  for (std::size_t n = 1; n <= horizon_ && n < sys.C.size(); ++n) {
    for (const auto& e : sys.C[n]) into_[n][e.target].push_back(Placement{e.source, e.g});
    for (auto& list : into_[n])
      std::sort(list.begin(), list.end(), [](const Placement& x, const Placement& y) {
        return x.offset != y.offset ? x.offset < y.offset : x.source < y.source;
      });
  }
  frames_ = sys.F;
}

ChainSet::ChainSet(const Structure& s, std::size_t base_level, std::vector<GroupSet> base, std::size_t top_level)
    : s_(&s), base_level_(base_level), top_level_(top_level), base_(std::move(base)) {
  if (top_level < base_level || top_level > s.horizon())
    throw Error(ErrorKind::out_of_range, "chain levels " + std::to_string(base_level) + ".." +
                                             std::to_string(top_level) + " outside horizon");
  if (base_.size() != s.rank()) throw Error(ErrorKind::invalid_argument, "base needs one set per tower");
  const std::size_t k = s.rank();
  count_.assign(top_level - base_level + 1, std::vector<Int>(k));
  bbox_.assign(top_level - base_level + 1, std::vector<std::optional<Box>>(k));
  for (std::size_t u = 0; u < k; ++u) {
    count_[0][u] = base_[u].size();
    bbox_[0][u] = base_[u].bbox();
  }
  for (std::size_t l = base_level + 1; l <= top_level; ++l) {
    const std::size_t i = l - base_level;
    for (std::size_t u = 0; u < k; ++u) {
      Int c = 0;
      std::optional<Box> bb;
      for (const auto& p : s.into(l, static_cast<int>(u))) {
        c += count_[i - 1][p.source];
        const auto& child = bbox_[i - 1][p.source];
        if (!child) continue;
        Box t = child->translate(p.offset);
        bb = bb ? bounding_box(*bb, t) : t;
      }
      count_[i][u] = c;
      bbox_[i][u] = bb;
    }
  }
}

Int ChainSet::total(std::size_t level) const {
  Int t = 0;
  for (std::size_t u = 0; u < s_->rank(); ++u) t += count(level, static_cast<int>(u));
  return t;
}

Int ChainSet::count_in(std::size_t level, int tower, const GroupSet& target) const {
  std::optional<Box> tb = target.as_box();
  if (target.empty()) return 0;
  if (!tb) {
    Int n = 0;
    for (const auto& p : positions(level, tower))
      if (target.contains(p)) n += 1;
    return n;
  }
  std::map<MemoKey, Int> memo;
  auto rec = [&](auto&& self, std::size_t l, int u, const Box& t) -> Int {
    const Int& c = count(l, u);
    if (sgn(c) == 0) return 0;
    const Box& bb = *bbox(l, u);
    if (t.contains(bb)) return c;
    if (!t.intersects(bb)) return 0;
    if (l == base_level_) return count_in_box(base_[u], t);
    MemoKey key{l, u, 0, t.lo.coords()};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Int sum = 0;
    for (const auto& p : s_->into(l, u)) sum += self(self, l - 1, p.source, t.translate(-p.offset));
    memo.emplace(std::move(key), sum);
    return sum;
  };
  return rec(rec, level, tower, *tb);
}

std::vector<GroupElement> ChainSet::positions(std::size_t level, int tower) const {
  if (count(level, tower) > Int(static_cast<unsigned long>(GroupSet::kMaterializeLimit)))
    throw Error(ErrorKind::too_large, "refined position set too large to enumerate");
  if (level == base_level_) return base_[tower].elements();
  std::vector<GroupElement> out;
  for (const auto& p : s_->into(level, tower))
    for (const auto& x : positions(level - 1, p.source)) out.push_back(x + p.offset);
  std::sort(out.begin(), out.end());
  return out;
}

Int pair_count(const ChainSet& a, const ChainSet& b, std::size_t level, int tower, const Box& window) {
  if (a.base_level() != b.base_level() || &a.structure() != &b.structure())
    throw Error(ErrorKind::invalid_argument, "pair_count needs chain sets over one structure and base level");
  const Structure& s = a.structure();
  const std::size_t base = a.base_level();
  std::map<MemoKey, Int> memo;
  auto rec = [&](auto&& self, std::size_t l, int u, int v, const Box& win) -> Int {
    const Int& ca = a.count(l, u);
    const Int& cb = b.count(l, v);
    if (sgn(ca) == 0 || sgn(cb) == 0) return 0;
    Box diff = box_difference(*a.bbox(l, u), *b.bbox(l, v));
    if (!win.intersects(diff)) return 0;
    if (win.contains(diff)) return ca * cb;
    if (l == base) return base_pair_count(a.base(u), b.base(v), win);
    MemoKey key{l, u, v, win.lo.coords()};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Int sum = 0;
    for (const auto& p : s.into(l, u))
      for (const auto& q : s.into(l, v))
        sum += self(self, l - 1, p.source, q.source, win.translate(q.offset - p.offset));
    memo.emplace(std::move(key), sum);
    return sum;
  };
  return rec(rec, level, tower, tower, window);
}

Int window_overlap_sum(const ChainSet& b, std::size_t level, int tower, const Box& window, const Box& frame) {
  const Structure& s = b.structure();
  const std::size_t base = b.base_level();
  const Int wsize = window.size();
  std::map<MemoKey, Int> memo;
  auto rec = [&](auto&& self, std::size_t l, int v, const Box& fr) -> Int {
    const Int& c = b.count(l, v);
    if (sgn(c) == 0) return 0;
    Box reach = box_sum(*b.bbox(l, v), window);
    if (fr.contains(reach)) return c * wsize;
    if (!fr.intersects(reach)) return 0;
    if (l == base) return base_overlap_sum(b.base(v), window, fr);
    MemoKey key{l, v, 0, fr.lo.coords()};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Int sum = 0;
    for (const auto& q : s.into(l, v)) sum += self(self, l - 1, q.source, fr.translate(-q.offset));
    memo.emplace(std::move(key), sum);
    return sum;
  };
  return rec(rec, level, tower, frame);
}

}  // namespace cflab
