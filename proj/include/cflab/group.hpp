#pragma once

#include "cflab/arith.hpp"

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cflab {

// Point of Z^d.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::size_t dim) : c_(dim) {}
  explicit GroupElement(std::vector<Int> coords) : c_(std::move(coords)) {}
  GroupElement(std::initializer_list<long> coords);

  static GroupElement zero(std::size_t dim) { return GroupElement(dim); }
  static GroupElement unit(std::size_t dim, std::size_t axis);
  static GroupElement scalar(const Int& v) { return GroupElement(std::vector<Int>{v}); }

  std::size_t dim() const { return c_.size(); }
  const Int& operator[](std::size_t i) const { return c_[i]; }
  Int& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Int>& coords() const { return c_; }
  bool is_zero() const;

  GroupElement& operator+=(const GroupElement& o);
  GroupElement& operator-=(const GroupElement& o);
  friend GroupElement operator+(GroupElement a, const GroupElement& b) { return a += b; }
  friend GroupElement operator-(GroupElement a, const GroupElement& b) { return a -= b; }
  GroupElement operator-() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.c_ == b.c_; }
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b);

  // "5" in dimension 1, "(1,2)" otherwise.
  std::string str() const;

 private:
  std::vector<Int> c_;
};

void require_same_dim(const GroupElement& a, const GroupElement& b);

// Half-open box lo + [0,ext_1) x ... x [0,ext_d); empty if some extent is 0.
struct Box {
  GroupElement lo;
  std::vector<Int> ext;

  Box() = default;
  Box(GroupElement l, std::vector<Int> e);
  static Box interval(const Int& a, const Int& b);  // [a, b)
  static Box point(const GroupElement& g);

  std::size_t dim() const { return lo.dim(); }
  bool empty() const;
  Int size() const;
  GroupElement last() const;  // lo + ext - 1
  bool contains(const GroupElement& g) const;
  bool contains(const Box& o) const;  // o subset of *this (empty o always contained)
  bool intersects(const Box& o) const;
  Box translate(const GroupElement& g) const;
  std::string str() const;

  friend bool operator==(const Box& a, const Box& b);
};

Box intersect(const Box& a, const Box& b);
// {a - b : a in A, b in B} for boxes, itself a box.
Box box_difference(const Box& a, const Box& b);
Box box_sum(const Box& a, const Box& b);
Box bounding_box(const Box& a, const Box& b);

// Finite subset of Z^d. Held either as a box or as a sorted explicit list.
class GroupSet {
 public:
  static constexpr std::size_t kMaterializeLimit = std::size_t{1} << 22;

  GroupSet() = default;
  explicit GroupSet(std::size_t dim) : dim_(dim) {}
  GroupSet(std::size_t dim, std::vector<GroupElement> elems);
  static GroupSet box(const Box& b);
  static GroupSet interval(const Int& a, const Int& b) { return box(Box::interval(a, b)); }
  static GroupSet singleton(const GroupElement& g);
  static GroupSet scalars(std::initializer_list<long> values);

  std::size_t dim() const { return dim_; }
  Int size() const;
  bool empty() const;
  bool contains(const GroupElement& g) const;
  bool is_box() const { return box_.has_value(); }
  // Box form when the set is exactly a box (detects explicit boxes too).
  std::optional<Box> as_box() const;
  std::optional<Box> bbox() const;
  const std::vector<GroupElement>& elements() const;  // materializes
  bool subset_of(const GroupSet& o) const;
  GroupSet translate(const GroupElement& g) const;
  std::string str() const;

  friend bool operator==(const GroupSet& a, const GroupSet& b);

 private:
  std::size_t dim_ = 1;
  std::optional<Box> box_;
  mutable std::optional<std::vector<GroupElement>> elems_;
};

GroupSet sumset(const GroupSet& a, const GroupSet& b);
GroupSet diffset(const GroupSet& a, const GroupSet& b);
GroupSet negate(const GroupSet& a);
GroupSet set_union(const GroupSet& a, const GroupSet& b);
GroupSet set_intersection(const GroupSet& a, const GroupSet& b);
GroupSet set_difference(const GroupSet& a, const GroupSet& b);
// #((g+F) symmetric-difference F) / #F
Rational folner_defect(const GroupElement& g, const GroupSet& f);

struct TranslateOverlap {
  bool disjoint = true;
  std::optional<std::pair<GroupElement, GroupElement>> witness;
};
TranslateOverlap disjoint_translates(const GroupSet& f, const GroupSet& c);

struct TranslateCover {
  std::size_t k = 0;
  GroupSet offsets;
};
// Disjoint translates of the box F whose union contains F - F.
TranslateCover cover_by_translates(const GroupSet& f);

}  // namespace cflab
