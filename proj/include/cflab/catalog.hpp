#pragma once

#include "cflab/system.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cflab {

RankOneSystem odometer(std::size_t horizon);
RankOneSystem chacon(std::size_t horizon);
RankOneSystem hk(std::size_t horizon);
// Z^2 boxes [-a_n, a_n]^2, a_0 = 0, with C_{n+1} = {0, factor * side_n * e_1}, side_n = 2a_n + 1 points.
RankOneSystem z2lh(std::size_t horizon, long factor = 10);

RankKSystem r2(std::size_t horizon);
RankKSystem r2s(std::size_t horizon);
RankKSystem fb(std::size_t horizon);

// One stacking recipe per target tower: the order of source towers from the
// bottom up and the spacer run above each copy (empty means no spacers).
struct TowerRecipe {
  std::vector<int> order;
  std::vector<Int> gaps;
};
using StackRule = std::function<std::vector<TowerRecipe>(std::size_t n, const std::vector<Int>& heights)>;

// Rank-k system over Z with F_0^i = {0}, stacked stage by stage from the rule.
RankKSystem stacked_system(const std::string& name, std::size_t rank, std::size_t horizon, StackRule rule);

struct CatalogSystem {
  std::string name;
  bool rank_one = false;
  RankOneSystem one;  // set when rank_one
  RankKSystem k;      // always set
};

using CatalogParams = std::vector<std::pair<std::string, Int>>;

std::vector<std::string> catalog_names();
std::size_t default_horizon(const std::string& name);
// Recognized keys: horizon (all), factor (z2lh).
CatalogSystem make_catalog(const std::string& name, const CatalogParams& params = {});
CatalogSystem wrap(RankOneSystem sys);
CatalogSystem wrap(RankKSystem sys);
// Extends both views to the given horizon.
void extend(CatalogSystem& sys, std::size_t horizon);

}  // namespace cflab
