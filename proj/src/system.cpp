#include "cflab/system.hpp"

#include <algorithm>

namespace cflab {

void extend(RankOneSystem& sys, std::size_t horizon) {
  while (sys.horizon() < horizon) {
    if (!sys.grow) throw Error(ErrorKind::out_of_range, "system '" + sys.name + "' has no generator rule to extend it");
    sys.grow(sys);
  }
}

void extend(RankKSystem& sys, std::size_t horizon) {
  while (sys.horizon() < horizon) {
    if (!sys.grow) throw Error(ErrorKind::out_of_range, "system '" + sys.name + "' has no generator rule to extend it");
    sys.grow(sys);
    sort_edges(sys);
  }
}

bool edge_less(const Edge& a, const Edge& b) {
  if (a.target != b.target) return a.target < b.target;
  if (a.g != b.g) return a.g < b.g;
  return a.source < b.source;
}

void sort_edges(RankKSystem& sys) {
  for (auto& c : sys.C) std::sort(c.begin(), c.end(), edge_less);
}

RankKSystem as_rank_k(const RankOneSystem& sys) {
  RankKSystem r;
  r.name = sys.name;
  r.dim = sys.dim;
  r.rank = 1;
  r.cert = sys.cert;
  for (const auto& f : sys.F) r.F.push_back({f});
  r.C.resize(sys.C.size());
  for (std::size_t n = 1; n < sys.C.size(); ++n)
    for (const auto& c : sys.C[n].elements()) r.C[n].push_back(Edge{0, c, 0});
  sort_edges(r);
  return r;
}

MarkedCylinder as_marked(const Cylinder& c) { return MarkedCylinder{c.level, {c.support}}; }

MarkedCylinder marked_cells(const RankKSystem& sys, std::size_t level, const std::vector<MarkedElement>& cells) {
  std::vector<std::vector<GroupElement>> per(sys.rank);
  for (const auto& c : cells) {
    if (c.mark < 0 || static_cast<std::size_t>(c.mark) >= sys.rank)
      throw Error(ErrorKind::invalid_argument, "tower mark out of range");
    per[c.mark].push_back(c.g);
  }
  MarkedCylinder m{level, {}};
  for (auto& p : per) m.support.emplace_back(sys.dim, std::move(p));
  return m;
}

MarkedCylinder base_cylinder(const RankKSystem& sys) {
  MarkedCylinder m{0, {}};
  for (std::size_t i = 0; i < sys.rank; ++i) m.support.push_back(sys.F.at(0).at(i));
  return m;
}

}  // namespace cflab
