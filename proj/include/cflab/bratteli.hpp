#pragma once

#include "cflab/system.hpp"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cflab {

// source == -1 marks the root at level 0.
struct BratteliEdge {
  int source = 0;
  int target = 0;
  std::size_t rank = 0;
  friend bool operator==(const BratteliEdge&, const BratteliEdge&) = default;
};

// levels[0] holds the root edges; levels[n] mirrors C_n in edge_less order,
// so edge identity is the index within its level.
struct OrderedBratteliDiagram {
  std::size_t k = 1;
  std::vector<std::vector<BratteliEdge>> levels;
  friend bool operator==(const OrderedBratteliDiagram&, const OrderedBratteliDiagram&) = default;
};

struct AdicPath {
  std::vector<std::size_t> edges;  // edges[n] indexes levels[n]
  friend bool operator==(const AdicPath&, const AdicPath&) = default;
};

OrderedBratteliDiagram export_diagram(const RankKSystem& sys);
RankKSystem to_cf(const OrderedBratteliDiagram& diag);

// Throws invalid_argument when ranks into some vertex are not 0..indegree-1.
void check_ranks(const OrderedBratteliDiagram& diag);
void check_path(const OrderedBratteliDiagram& diag, const AdicPath& path);
// nullopt when every edge of the path is maximal.
std::optional<AdicPath> vershik_successor(const OrderedBratteliDiagram& diag, const AdicPath& path);
AdicPath minimal_path(const OrderedBratteliDiagram& diag, int vertex, std::size_t level);
// Path of the point at position p of tower j at the given level.
AdicPath path_of(const RankKSystem& sys, int tower, const Int& position, std::size_t level);
std::string path_str(const OrderedBratteliDiagram& diag, const AdicPath& path);

struct OracleReport {
  bool pass = true;
  Int checked = 0;
  std::string counterexample;
};
OracleReport equivalence_oracle(const RankKSystem& sys, const OrderedBratteliDiagram& diag, std::size_t depth);
OracleReport equivalence_oracle(const RankKSystem& sys, std::size_t depth);

// Swaps two adjacent order ranks entering one vertex of the level, preferring edges from different sources.
OrderedBratteliDiagram permute_ranks(const OrderedBratteliDiagram& diag, std::size_t level);

nlohmann::json to_json(const OrderedBratteliDiagram& diag);
OrderedBratteliDiagram diagram_from_json(const nlohmann::json& j);
std::string to_dot(const OrderedBratteliDiagram& diag);

}  // namespace cflab
