#include "cflab/group.hpp"

#include <algorithm>
#include <sstream>

namespace cflab {

GroupElement::GroupElement(std::initializer_list<long> coords) {
  c_.reserve(coords.size());
  for (long v : coords) c_.emplace_back(v);
}

GroupElement GroupElement::unit(std::size_t dim, std::size_t axis) {
  GroupElement g(dim);
  g.c_.at(axis) = 1;
  return g;
}

bool GroupElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Int& v) { return sgn(v) == 0; });
}

void require_same_dim(const GroupElement& a, const GroupElement& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

GroupElement& GroupElement::operator+=(const GroupElement& o) {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

GroupElement& GroupElement::operator-=(const GroupElement& o) {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

GroupElement GroupElement::operator-() const {
  GroupElement r(*this);
  for (auto& v : r.c_) v = -v;
  return r;
}

std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
  if (a.dim() != b.dim()) return a.dim() <=> b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string GroupElement::str() const {
  if (c_.size() == 1) return c_[0].get_str();
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ",";
    s += c_[i].get_str();
  }
  return s + ")";
}

// ---------------------------------------------------------------- Box

Box::Box(GroupElement l, std::vector<Int> e) : lo(std::move(l)), ext(std::move(e)) {
  if (lo.dim() != ext.size()) throw Error(ErrorKind::dimension_mismatch, "box corner/extent dimension mismatch");
  for (auto& v : ext)
    if (sgn(v) < 0) v = 0;
}

Box Box::interval(const Int& a, const Int& b) {
  Int e = b - a;
  return Box(GroupElement::scalar(a), {e});
}

Box Box::point(const GroupElement& g) { return Box(g, std::vector<Int>(g.dim(), Int(1))); }

bool Box::empty() const {
  return std::any_of(ext.begin(), ext.end(), [](const Int& v) { return sgn(v) <= 0; });
}

Int Box::size() const {
  Int s = 1;
  for (const auto& v : ext) s *= v;
  return s;
}

GroupElement Box::last() const {
  GroupElement g = lo;
  for (std::size_t i = 0; i < dim(); ++i) g[i] += ext[i] - 1;
  return g;
}

bool Box::contains(const GroupElement& g) const {
  require_same_dim(lo, g);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (g[i] < lo[i] || g[i] >= lo[i] + ext[i]) return false;
  }
  return true;
}

bool Box::contains(const Box& o) const {
  if (o.empty()) return true;
  if (empty()) return false;
  require_same_dim(lo, o.lo);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (o.lo[i] < lo[i] || o.lo[i] + o.ext[i] > lo[i] + ext[i]) return false;
  }
  return true;
}

bool Box::intersects(const Box& o) const { return !intersect(*this, o).empty(); }

Box Box::translate(const GroupElement& g) const { return Box(lo + g, ext); }

std::string Box::str() const {
  std::string s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) s += "x";
    s += "[" + lo[i].get_str() + "," + Int(lo[i] + ext[i]).get_str() + ")";
  }
  return s;
}

bool operator==(const Box& a, const Box& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return a.lo == b.lo && a.ext == b.ext;
}

Box intersect(const Box& a, const Box& b) {
  require_same_dim(a.lo, b.lo);
  GroupElement lo(a.dim());
  std::vector<Int> ext(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    lo[i] = std::max(a.lo[i], b.lo[i]);
    Int hi = std::min(Int(a.lo[i] + a.ext[i]), Int(b.lo[i] + b.ext[i]));
    ext[i] = hi > lo[i] ? Int(hi - lo[i]) : Int(0);
  }
  return Box(lo, ext);
}

Box box_difference(const Box& a, const Box& b) {
  require_same_dim(a.lo, b.lo);
  if (a.empty() || b.empty()) return Box(GroupElement(a.dim()), std::vector<Int>(a.dim(), Int(0)));
  GroupElement lo = a.lo - b.last();
  std::vector<Int> ext(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) ext[i] = a.ext[i] + b.ext[i] - 1;
  return Box(lo, ext);
}

Box box_sum(const Box& a, const Box& b) {
  require_same_dim(a.lo, b.lo);
  if (a.empty() || b.empty()) return Box(GroupElement(a.dim()), std::vector<Int>(a.dim(), Int(0)));
  std::vector<Int> ext(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) ext[i] = a.ext[i] + b.ext[i] - 1;
  return Box(a.lo + b.lo, ext);
}

Box bounding_box(const Box& a, const Box& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  require_same_dim(a.lo, b.lo);
  GroupElement lo(a.dim());
  std::vector<Int> ext(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(a.lo[i], b.lo[i]);
    Int hi = std::max(Int(a.lo[i] + a.ext[i]), Int(b.lo[i] + b.ext[i]));
    ext[i] = hi - lo[i];
  }
  return Box(lo, ext);
}

// ---------------------------------------------------------------- GroupSet

namespace {

std::vector<GroupElement> enumerate_box(const Box& b) {
  std::vector<GroupElement> out;
  if (b.empty()) return out;
  if (b.size() > Int(static_cast<unsigned long>(GroupSet::kMaterializeLimit)))
    throw Error(ErrorKind::too_large, "box " + b.str() + " too large to enumerate");
  out.reserve(b.size().get_ui());
  GroupElement cur = b.lo;
  const std::size_t d = b.dim();
  while (true) {
    out.push_back(cur);
    std::size_t i = d;
    while (i > 0) {
      --i;
      cur[i] += 1;
      if (cur[i] < b.lo[i] + b.ext[i]) break;
      cur[i] = b.lo[i];
      if (i == 0) return out;
    }
  }
}

void check_product_size(const Int& a, const Int& b) {
  if (a * b > Int(static_cast<unsigned long>(GroupSet::kMaterializeLimit) * 4))
    throw Error(ErrorKind::too_large, "sumset of sizes " + a.get_str() + " and " + b.get_str() + " too large");
}

void require_dim(const GroupSet& a, const GroupSet& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

GroupSet::GroupSet(std::size_t dim, std::vector<GroupElement> elems) : dim_(dim) {
  for (const auto& e : elems)
    if (e.dim() != dim) throw Error(ErrorKind::dimension_mismatch, "element " + e.str() + " has wrong dimension");
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  elems_ = std::move(elems);
}

GroupSet GroupSet::box(const Box& b) {
  GroupSet s(b.dim());
  if (b.empty()) {
    s.elems_ = std::vector<GroupElement>{};
  } else {
    s.box_ = b;
  }
  return s;
}

GroupSet GroupSet::singleton(const GroupElement& g) { return GroupSet(g.dim(), {g}); }

GroupSet GroupSet::scalars(std::initializer_list<long> values) {
  std::vector<GroupElement> e;
  for (long v : values) e.push_back(GroupElement{v});
  return GroupSet(1, std::move(e));
}

Int GroupSet::size() const {
  if (box_) return box_->size();
  return Int(static_cast<unsigned long>(elems_ ? elems_->size() : 0));
}

bool GroupSet::empty() const {
  if (box_) return false;
  return !elems_ || elems_->empty();
}

bool GroupSet::contains(const GroupElement& g) const {
  if (g.dim() != dim_) throw Error(ErrorKind::dimension_mismatch, "element " + g.str() + " has wrong dimension");
  if (box_) return box_->contains(g);
  if (!elems_) return false;
  return std::binary_search(elems_->begin(), elems_->end(), g);
}

std::optional<Box> GroupSet::as_box() const {
  if (box_) return box_;
  auto b = bbox();
  if (!b) return std::nullopt;
  if (b->size() == size()) return b;
  return std::nullopt;
}

std::optional<Box> GroupSet::bbox() const {
  if (box_) return box_;
  if (!elems_ || elems_->empty()) return std::nullopt;
  GroupElement lo = elems_->front(), hi = elems_->front();
  for (const auto& e : *elems_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (e[i] < lo[i]) lo[i] = e[i];
      if (e[i] > hi[i]) hi[i] = e[i];
    }
  }
  std::vector<Int> ext(dim_);
  for (std::size_t i = 0; i < dim_; ++i) ext[i] = hi[i] - lo[i] + 1;
  return Box(lo, ext);
}

const std::vector<GroupElement>& GroupSet::elements() const {
  if (!elems_) {
    if (box_)
      elems_ = enumerate_box(*box_);
    else
      elems_ = std::vector<GroupElement>{};
  }
  return *elems_;
}

bool GroupSet::subset_of(const GroupSet& o) const {
  require_dim(*this, o);
  if (empty()) return true;
  if (o.empty()) return false;
  if (auto ob = o.as_box()) return ob->contains(*bbox());
  if (size() > o.size()) return false;
  for (const auto& e : elements())
    if (!o.contains(e)) return false;
  return true;
}

GroupSet GroupSet::translate(const GroupElement& g) const {
  if (g.dim() != dim_) throw Error(ErrorKind::dimension_mismatch, "translate by element of wrong dimension");
  if (box_) return box(box_->translate(g));
  std::vector<GroupElement> e;
  e.reserve(elements().size());
  for (const auto& x : elements()) e.push_back(x + g);
  return GroupSet(dim_, std::move(e));
}

std::string GroupSet::str() const {
  if (box_) return box_->str();
  std::string s = "{";
  const auto& e = elements();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += e[i].str();
  }
  return s + "}";
}

bool operator==(const GroupSet& a, const GroupSet& b) {
  if (a.dim() != b.dim()) return false;
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  auto ab = a.as_box(), bb = b.as_box();
  if (ab || bb) return ab && bb && *ab == *bb;
  return a.elements() == b.elements();
}

GroupSet sumset(const GroupSet& a, const GroupSet& b) {
  require_dim(a, b);
  if (a.empty() || b.empty()) return GroupSet(a.dim(), {});
  auto ab = a.as_box(), bb = b.as_box();
  if (a.is_box() && b.is_box()) return GroupSet::box(box_sum(*ab, *bb));
  check_product_size(a.size(), b.size());
  std::vector<GroupElement> out;
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) out.push_back(x + y);
  GroupSet r(a.dim(), std::move(out));
  if (auto rb = r.as_box(); rb && ab && bb) return GroupSet::box(*rb);
  return r;
}

GroupSet negate(const GroupSet& a) {
  if (a.is_box()) {
    Box b = *a.as_box();
    return GroupSet::box(Box(-b.last(), b.ext));
  }
  std::vector<GroupElement> e;
  for (const auto& x : a.elements()) e.push_back(-x);
  return GroupSet(a.dim(), std::move(e));
}

GroupSet diffset(const GroupSet& a, const GroupSet& b) { return sumset(a, negate(b)); }

GroupSet set_union(const GroupSet& a, const GroupSet& b) {
  require_dim(a, b);
  if (a.subset_of(b)) return b;
  if (b.subset_of(a)) return a;
  std::vector<GroupElement> e = a.elements();
  e.insert(e.end(), b.elements().begin(), b.elements().end());
  return GroupSet(a.dim(), std::move(e));
}

GroupSet set_intersection(const GroupSet& a, const GroupSet& b) {
  require_dim(a, b);
  if (a.is_box() && b.is_box()) return GroupSet::box(intersect(*a.as_box(), *b.as_box()));
  const GroupSet& small = a.size() <= b.size() ? a : b;
  const GroupSet& large = a.size() <= b.size() ? b : a;
  if (small.is_box() && !large.is_box()) {
    std::vector<GroupElement> e;
    for (const auto& x : large.elements())
      if (small.contains(x)) e.push_back(x);
    return GroupSet(a.dim(), std::move(e));
  }
  std::vector<GroupElement> e;
  for (const auto& x : small.elements())
    if (large.contains(x)) e.push_back(x);
  return GroupSet(a.dim(), std::move(e));
}

GroupSet set_difference(const GroupSet& a, const GroupSet& b) {
  require_dim(a, b);
  std::vector<GroupElement> e;
  for (const auto& x : a.elements())
    if (!b.contains(x)) e.push_back(x);
  return GroupSet(a.dim(), std::move(e));
}

Rational folner_defect(const GroupElement& g, const GroupSet& f) {
  if (f.empty()) throw Error(ErrorKind::invalid_argument, "folner_defect of an empty set");
  if (g.dim() != f.dim()) throw Error(ErrorKind::dimension_mismatch, "folner_defect dimension mismatch");
  Int common;
  if (auto b = f.as_box(); b && f.is_box()) {
    common = intersect(b->translate(g), *b).size();
  } else {
    common = 0;
    for (const auto& x : f.elements())
      if (f.contains(x + g)) common += 1;
  }
  return make_rational(2 * (f.size() - common), f.size());
}

TranslateOverlap disjoint_translates(const GroupSet& f, const GroupSet& c) {
  require_dim(f, c);
  TranslateOverlap r;
  if (f.empty()) return r;
  const auto& cs = c.elements();
  std::optional<Box> fb = f.is_box() ? f.as_box() : std::nullopt;
  std::optional<GroupSet> diff;
  if (!fb) diff = diffset(f, f);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      GroupElement delta = cs[j] - cs[i];
      bool overlap = fb ? box_difference(*fb, *fb).contains(delta) : diff->contains(delta);
      if (overlap) {
        r.disjoint = false;
        r.witness = std::make_pair(cs[i], cs[j]);
        return r;
      }
    }
  }
  return r;
}

TranslateCover cover_by_translates(const GroupSet& f) {
  auto b = f.as_box();
  if (!b) throw Error(ErrorKind::unsupported_shape, "cover_by_translates needs a box, got " + f.str());
  const std::size_t d = f.dim();
  std::vector<std::vector<Int>> choices(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (b->ext[i] == 1) {
      choices[i] = {Int(-b->lo[i])};
    } else {
      choices[i] = {Int(-(b->ext[i] - 1) - b->lo[i]), Int(1 - b->lo[i])};
    }
  }
  std::vector<GroupElement> offsets{GroupElement(d)};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<GroupElement> next;
    for (const auto& o : offsets)
      for (const auto& v : choices[i]) {
        GroupElement g = o;
        g[i] = v;
        next.push_back(g);
      }
    offsets = std::move(next);
  }
  TranslateCover r;
  r.k = offsets.size();
  r.offsets = GroupSet(d, std::move(offsets));
  return r;
}

}  // namespace cflab
