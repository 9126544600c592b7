#pragma once

// Position sets of refined cylinders, kept in factored form: base sets at
// one level pushed through the edge sets of the levels above. Counting
// queries recurse top-down and prune whole sub-trees by bounding boxes, so
// deep towers are never enumerated.

#include "cflab/system.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cflab {

struct Placement {
  int source = 0;
  GroupElement offset;
};

// Edge sets grouped by target tower, placements sorted by offset.
class Structure {
 public:
  explicit Structure(const RankKSystem& sys);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rank_; }
  std::size_t horizon() const { return horizon_; }
  const std::vector<Placement>& into(std::size_t level, int tower) const { return into_[level][tower]; }
  const GroupSet& frame(std::size_t level, int tower) const { return frames_[level][tower]; }

 private:
  std::size_t dim_ = 1, rank_ = 1, horizon_ = 0;
  std::vector<std::vector<std::vector<Placement>>> into_;
  std::vector<std::vector<GroupSet>> frames_;
};

class ChainSet {
 public:
  ChainSet(const Structure& s, std::size_t base_level, std::vector<GroupSet> base, std::size_t top_level);

  const Structure& structure() const { return *s_; }
  std::size_t base_level() const { return base_level_; }
  std::size_t top_level() const { return top_level_; }
  const GroupSet& base(int tower) const { return base_[tower]; }
  const Int& count(std::size_t level, int tower) const { return count_[level - base_level_][tower]; }
  const std::optional<Box>& bbox(std::size_t level, int tower) const { return bbox_[level - base_level_][tower]; }
  Int total(std::size_t level) const;

  // #{p in positions(level, tower) : p in target}
  Int count_in(std::size_t level, int tower, const GroupSet& target) const;
  std::vector<GroupElement> positions(std::size_t level, int tower) const;

 private:
  const Structure* s_;
  std::size_t base_level_, top_level_;
  std::vector<GroupSet> base_;
  std::vector<std::vector<Int>> count_;
  std::vector<std::vector<std::optional<Box>>> bbox_;
};

// #{(q, p) : q in a(level, tower), p in b(level, tower), q - p in window}
Int pair_count(const ChainSet& a, const ChainSet& b, std::size_t level, int tower, const Box& window);

// Sum over p in b(level, tower) of #((p + window) cap frame).
Int window_overlap_sum(const ChainSet& b, std::size_t level, int tower, const Box& window, const Box& frame);

// Sum over x in [x0, x0+n) of #([x + a, x + a + w) cap [f0, f0 + fl)).
Int overlap_sum_1d(const Int& x0, const Int& n, const Int& a, const Int& w, const Int& f0, const Int& fl);

}  // namespace cflab
