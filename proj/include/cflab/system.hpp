#pragma once

#include "cflab/group.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cflab {

// Closed-form facts about the infinite sequence that a finite prefix cannot show.
struct SystemCertificate {
  bool spacer_free_tail = false;  // every stage beyond the stored prefix tiles without spacers
  std::optional<Rational> total_measure;
  bool infinite_measure = false;
  std::string note;
};

struct RankOneSystem {
  std::string name;
  std::size_t dim = 1;
  std::vector<GroupSet> F;  // F_0..F_N
  std::vector<GroupSet> C;  // C_1..C_N stored at C[1..N]; C[0] is unused
  SystemCertificate cert;
  std::function<void(RankOneSystem&)> grow;  // appends stage N+1

  std::size_t horizon() const { return F.empty() ? 0 : F.size() - 1; }
};

// Appends stages until the horizon is reached.
void extend(RankOneSystem& sys, std::size_t horizon);

// Tower marks are 0-based in the C++ interface.
struct MarkedElement {
  GroupElement g;
  int mark = 0;
  friend bool operator==(const MarkedElement&, const MarkedElement&) = default;
};

struct Edge {
  int source = 0;
  GroupElement g;
  int target = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

bool edge_less(const Edge& a, const Edge& b);

struct RankKSystem {
  std::string name;
  std::size_t dim = 1;
  std::size_t rank = 1;
  std::vector<std::vector<GroupSet>> F;  // F[n][i] = F_n^i
  std::vector<std::vector<Edge>> C;      // C[n] for n >= 1, sorted by edge_less
  SystemCertificate cert;
  std::function<void(RankKSystem&)> grow;

  std::size_t horizon() const { return F.empty() ? 0 : F.size() - 1; }
};

void extend(RankKSystem& sys, std::size_t horizon);
void sort_edges(RankKSystem& sys);
RankKSystem as_rank_k(const RankOneSystem& sys);

struct Cylinder {
  std::size_t level = 0;
  GroupSet support;
};

struct MarkedCylinder {
  std::size_t level = 0;
  std::vector<GroupSet> support;  // per tower
};

MarkedCylinder as_marked(const Cylinder& c);

// Level-n cylinder made of single cells (position, tower).
MarkedCylinder marked_cells(const RankKSystem& sys, std::size_t level,
                            const std::vector<MarkedElement>& cells);

// X_0 = [F_0]_0.
MarkedCylinder base_cylinder(const RankKSystem& sys);

}  // namespace cflab
