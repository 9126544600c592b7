#include "cflab/bratteli.hpp"

#include "cflab/finite_rank.hpp"

#include <algorithm>
#include <sstream>

namespace cflab {

namespace {

std::size_t indegree(const std::vector<BratteliEdge>& level, int target) {
  return static_cast<std::size_t>(
      std::count_if(level.begin(), level.end(), [&](const BratteliEdge& e) { return e.target == target; }));
}

std::optional<std::size_t> edge_with(const std::vector<BratteliEdge>& level, int target, std::size_t rank) {
  for (std::size_t i = 0; i < level.size(); ++i)
    if (level[i].target == target && level[i].rank == rank) return i;
  return std::nullopt;
}

}  // namespace

OrderedBratteliDiagram export_diagram(const RankKSystem& sys) {
  CastleView cv = castle_view(sys);
  for (const auto& st : cv.stages)
    if (!no_spacers(st))
      throw Error(ErrorKind::unsupported_shape, "diagram export needs a system without spacers (stage " +
                                                    std::to_string(st.level) + ")");
  for (std::size_t i = 0; i < sys.rank; ++i)
    if (cv.heights[0][i] != 1) throw Error(ErrorKind::unsupported_shape, "diagram export needs F_0^i = {0}");
  OrderedBratteliDiagram d;
  d.k = sys.rank;
  d.levels.emplace_back();
  for (std::size_t i = 0; i < sys.rank; ++i) d.levels[0].push_back({-1, static_cast<int>(i), 0});
  for (std::size_t n = 1; n <= sys.horizon(); ++n) {
    std::vector<BratteliEdge> level;
    const auto& edges = sys.C[n];  // sorted by target, then offset
    for (std::size_t a = 0; a < edges.size(); ++a) {
      std::size_t rank = 0;
      for (std::size_t b = 0; b < a; ++b)
        if (edges[b].target == edges[a].target) ++rank;
      level.push_back({edges[a].source, edges[a].target, rank});
    }
    d.levels.push_back(std::move(level));
  }
  return d;
}

void check_ranks(const OrderedBratteliDiagram& d) {
  for (std::size_t n = 0; n < d.levels.size(); ++n)
    for (std::size_t j = 0; j < d.k; ++j) {
      const std::size_t deg = indegree(d.levels[n], static_cast<int>(j));
      std::vector<bool> seen(deg, false);
      for (const auto& e : d.levels[n]) {
        if (e.target != static_cast<int>(j)) continue;
        if (e.rank >= deg || seen[e.rank])
          throw Error(ErrorKind::invalid_argument, "order ranks into vertex " + std::to_string(j + 1) + " at level " +
                                                       std::to_string(n) + " are not 0..indegree-1");
        seen[e.rank] = true;
      }
    }
}

RankKSystem to_cf(const OrderedBratteliDiagram& d) {
  check_ranks(d);
  RankKSystem s;
  s.name = "bratteli";
  s.dim = 1;
  s.rank = d.k;
  s.F.push_back(std::vector<GroupSet>(d.k, GroupSet::interval(0, 1)));
  s.C.emplace_back();
  std::vector<Int> h(d.k, Int(1));
  for (std::size_t n = 1; n < d.levels.size(); ++n) {
    std::vector<Edge> edges;
    std::vector<Int> next(d.k, Int(0));
    for (std::size_t j = 0; j < d.k; ++j) {
      const std::size_t deg = indegree(d.levels[n], static_cast<int>(j));
      Int pos = 0;
      for (std::size_t r = 0; r < deg; ++r) {
        const auto& e = d.levels[n][*edge_with(d.levels[n], static_cast<int>(j), r)];
        edges.push_back(Edge{e.source, GroupElement::scalar(pos), e.target});
        pos += h[e.source];
      }
      next[j] = pos;
    }
    std::vector<GroupSet> frames;
    for (const auto& x : next) frames.push_back(GroupSet::interval(0, x));
    s.C.push_back(std::move(edges));
    s.F.push_back(std::move(frames));
    h = std::move(next);
  }
  sort_edges(s);
  s.cert.spacer_free_tail = false;
  return s;
}

void check_path(const OrderedBratteliDiagram& d, const AdicPath& p) {
  if (p.edges.empty() || p.edges.size() > d.levels.size())
    throw Error(ErrorKind::invalid_argument, "path length must be between 1 and the number of levels");
  for (std::size_t n = 0; n < p.edges.size(); ++n) {
    if (p.edges[n] >= d.levels[n].size())
      throw Error(ErrorKind::invalid_argument, "edge index out of range at level " + std::to_string(n));
    const auto& e = d.levels[n][p.edges[n]];
    if (n == 0 && e.source != -1) throw Error(ErrorKind::invalid_argument, "path must start at the root");
    if (n > 0 && e.source != d.levels[n - 1][p.edges[n - 1]].target)
      throw Error(ErrorKind::invalid_argument, "path is disconnected at level " + std::to_string(n));
  }
}

AdicPath minimal_path(const OrderedBratteliDiagram& d, int vertex, std::size_t level) {
  AdicPath p;
  p.edges.resize(level + 1);
  int v = vertex;
  for (std::size_t n = level + 1; n-- > 0;) {
    auto e = edge_with(d.levels[n], v, 0);
    if (!e) throw Error(ErrorKind::invalid_argument, "vertex without incoming edges");
    p.edges[n] = *e;
    v = d.levels[n][*e].source;
  }
  return p;
}

std::optional<AdicPath> vershik_successor(const OrderedBratteliDiagram& d, const AdicPath& path) {
  check_path(d, path);
  for (std::size_t n = 0; n < path.edges.size(); ++n) {
    const auto& e = d.levels[n][path.edges[n]];
    if (e.rank + 1 >= indegree(d.levels[n], e.target)) continue;
    AdicPath next = path;
    next.edges[n] = *edge_with(d.levels[n], e.target, e.rank + 1);
    if (n > 0) {
      AdicPath low = minimal_path(d, d.levels[n][next.edges[n]].source, n - 1);
      std::copy(low.edges.begin(), low.edges.end(), next.edges.begin());
    }
    return next;
  }
  return std::nullopt;
}

AdicPath path_of(const RankKSystem& sys, int tower, const Int& position, std::size_t level) {
  if (level > sys.horizon()) throw Error(ErrorKind::out_of_range, "path level beyond horizon");
  AdicPath p;
  p.edges.resize(level + 1);
  Int pos = position;
  int j = tower;
  for (std::size_t n = level; n >= 1; --n) {
    bool found = false;
    for (std::size_t i = 0; i < sys.C[n].size() && !found; ++i) {
      const auto& e = sys.C[n][i];
      if (e.target != j) continue;
      const Int& off = e.g[0];
      if (off <= pos && pos < off + sys.F[n - 1][e.source].size()) {
        p.edges[n] = i;
        pos -= off;
        j = e.source;
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::invalid_argument, "position is a spacer");
  }
  if (sgn(pos) != 0) throw Error(ErrorKind::invalid_argument, "position is not a level of the tower");
  p.edges[0] = static_cast<std::size_t>(j);
  return p;
}

std::string path_str(const OrderedBratteliDiagram& d, const AdicPath& path) {
  std::string s;
  for (std::size_t n = 0; n < path.edges.size(); ++n) {
    const auto& e = d.levels[n][path.edges[n]];
    if (!s.empty()) s += " ";
    s += (e.source < 0 ? std::string("r") : std::to_string(e.source + 1)) + ">" + std::to_string(e.target + 1) +
         "#" + std::to_string(e.rank);
  }
  return s;
}

OracleReport equivalence_oracle(const RankKSystem& sys, const OrderedBratteliDiagram& d, std::size_t depth) {
  if (depth > sys.horizon() || depth + 1 > d.levels.size())
    throw Error(ErrorKind::out_of_range, "oracle depth beyond horizon");
  OracleReport r;
  for (std::size_t j = 0; j < sys.rank; ++j) {
    const Int h = sys.F[depth][j].size();
    for (Int p = 0; p < h; ++p) {
      AdicPath here = path_of(sys, static_cast<int>(j), p, depth);
      auto succ = vershik_successor(d, here);
      r.checked += 1;
      bool ok;
      if (p + 1 < h)
        ok = succ && *succ == path_of(sys, static_cast<int>(j), p + 1, depth);
      else
        ok = !succ;
      if (!ok) {
        r.pass = false;
        r.counterexample = "tower " + std::to_string(j + 1) + " position " + p.get_str() + ": path " +
                           path_str(d, here) + " -> " + (succ ? path_str(d, *succ) : std::string("maximal"));
        return r;
      }
    }
  }
  return r;
}

OracleReport equivalence_oracle(const RankKSystem& sys, std::size_t depth) {
  return equivalence_oracle(sys, export_diagram(sys), depth);
}

OrderedBratteliDiagram permute_ranks(const OrderedBratteliDiagram& diag, std::size_t level) {
  if (level == 0 || level >= diag.levels.size()) throw Error(ErrorKind::out_of_range, "level out of range");
  OrderedBratteliDiagram d = diag;
  // prefer adjacent ranks with different sources so the order really changes
  std::optional<std::pair<std::size_t, std::size_t>> fallback;
  for (std::size_t j = 0; j < d.k; ++j) {
    const std::size_t deg = indegree(d.levels[level], static_cast<int>(j));
    for (std::size_t r = 0; r + 1 < deg; ++r) {
      std::size_t a = *edge_with(d.levels[level], static_cast<int>(j), r);
      std::size_t b = *edge_with(d.levels[level], static_cast<int>(j), r + 1);
      if (!fallback) fallback = {a, b};
      if (d.levels[level][a].source != d.levels[level][b].source) {
        std::swap(d.levels[level][a].rank, d.levels[level][b].rank);
        return d;
      }
    }
  }
  if (fallback) {
    std::swap(d.levels[level][fallback->first].rank, d.levels[level][fallback->second].rank);
    return d;
  }
  throw Error(ErrorKind::invalid_argument, "no vertex with two incoming edges at that level");
}

nlohmann::json to_json(const OrderedBratteliDiagram& d) {
  nlohmann::json j;
  j["k"] = d.k;
  j["levels"] = nlohmann::json::array();
  for (std::size_t n = 0; n < d.levels.size(); ++n) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : d.levels[n])
      edges.push_back({{"id", "e" + std::to_string(n) + "_" + std::to_string(e.target + 1) + "_" + std::to_string(e.rank)},
                       {"src", e.source + 1},
                       {"tgt", e.target + 1},
                       {"rank", e.rank}});
    j["levels"].push_back({{"edges", edges}});
  }
  return j;
}

OrderedBratteliDiagram diagram_from_json(const nlohmann::json& j) {
  OrderedBratteliDiagram d;
  try {
    d.k = j.at("k").get<std::size_t>();
    for (const auto& lv : j.at("levels")) {
      std::vector<BratteliEdge> edges;
      for (const auto& e : lv.at("edges"))
        edges.push_back({e.at("src").get<int>() - 1, e.at("tgt").get<int>() - 1, e.at("rank").get<std::size_t>()});
      d.levels.push_back(std::move(edges));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::parse, std::string("bad diagram JSON: ") + ex.what());
  }
  check_ranks(d);
  return d;
}

std::string to_dot(const OrderedBratteliDiagram& d) {
  std::ostringstream os;
  os << "digraph bratteli {\n  rankdir=TB;\n  root [shape=point];\n";
  for (std::size_t n = 0; n < d.levels.size(); ++n)
    for (std::size_t j = 0; j < d.k; ++j)
      os << "  v" << n << "_" << j + 1 << " [label=\"" << j + 1 << "\"];\n";
  for (std::size_t n = 0; n < d.levels.size(); ++n)
    for (const auto& e : d.levels[n]) {
      std::string src = e.source < 0 ? "root" : "v" + std::to_string(n - 1) + "_" + std::to_string(e.source + 1);
      os << "  " << src << " -> v" << n << "_" << e.target + 1 << " [id=\"e" << n << "_" << e.target + 1 << "_"
         << e.rank << "\", label=\"" << e.rank << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace cflab
