#include "cflab/catalog.hpp"

#include <algorithm>

namespace cflab {

namespace {

RankOneSystem interval_system(const std::string& name, std::size_t horizon,
                              std::function<std::pair<std::vector<Int>, Int>(const Int& h)> stage) {
  RankOneSystem s;
  s.name = name;
  s.dim = 1;
  s.F.push_back(GroupSet::interval(0, 1));
  s.C.push_back(GroupSet(1));
  s.grow = [stage](RankOneSystem& sys) {
    auto [offs, next_h] = stage(sys.F.back().size());
    std::vector<GroupElement> c;
    for (const auto& o : offs) c.push_back(GroupElement::scalar(o));
    sys.C.push_back(GroupSet(1, std::move(c)));
    sys.F.push_back(GroupSet::interval(0, next_h));
  };
  extend(s, horizon);
  return s;
}

}  // namespace

RankOneSystem odometer(std::size_t horizon) {
  auto s = interval_system("odometer", horizon, [](const Int& h) {
    return std::pair<std::vector<Int>, Int>{{0, h}, 2 * h};
  });
  s.cert.spacer_free_tail = true;
  s.cert.total_measure = Rational(1);
  s.cert.note = "h_n = 2^n = #C_1...#C_n";
  return s;
}

RankOneSystem chacon(std::size_t horizon) {
  auto s = interval_system("chacon", horizon, [](const Int& h) {
    return std::pair<std::vector<Int>, Int>{{0, h, 2 * h + 1}, 3 * h + 1};
  });
  s.cert.total_measure = Rational(3, 2);
  s.cert.note = "h_n = (3^(n+1) - 1)/2, #C_1...#C_n = 3^n";
  return s;
}

RankOneSystem hk(std::size_t horizon) {
  auto s = interval_system("hk", horizon, [](const Int& h) {
    return std::pair<std::vector<Int>, Int>{{0, 3 * h}, 4 * h};
  });
  s.cert.infinite_measure = true;
  s.cert.note = "h_n = 4^n, #C_1...#C_n = 2^n";
  return s;
}

RankOneSystem z2lh(std::size_t horizon, long factor) {
  if (factor < 1) throw Error(ErrorKind::invalid_argument, "z2lh factor must be positive");
  RankOneSystem s;
  s.name = "z2lh";
  s.dim = 2;
  s.F.push_back(GroupSet::singleton(GroupElement{0, 0}));
  s.C.push_back(GroupSet(2));
  s.grow = [factor](RankOneSystem& sys) {
    const Box f = *sys.F.back().as_box();
    const Int side = f.ext[0];
    const Int v = side * factor;
    sys.C.push_back(GroupSet(2, {GroupElement{0, 0}, GroupElement(std::vector<Int>{v, 0})}));
    GroupElement lo(std::vector<Int>{f.lo[0] - v, f.lo[1] - v});
    sys.F.push_back(GroupSet::box(Box(lo, {side + 2 * v, side + 2 * v})));
  };
  extend(s, horizon);
  s.cert.infinite_measure = true;
  s.cert.note = "#F_n grows by (1+2*factor)^2 per stage against #C = 2";
  return s;
}

RankKSystem stacked_system(const std::string& name, std::size_t rank, std::size_t horizon, StackRule rule) {
  RankKSystem s;
  s.name = name;
  s.dim = 1;
  s.rank = rank;
  s.F.push_back(std::vector<GroupSet>(rank, GroupSet::interval(0, 1)));
  s.C.emplace_back();
  s.grow = [rule, rank](RankKSystem& sys) {
    std::vector<Int> h;
    for (const auto& f : sys.F.back()) h.push_back(f.size());
    auto recipes = rule(sys.horizon(), h);
    if (recipes.size() != rank) throw Error(ErrorKind::invalid_argument, "stack rule must give one recipe per tower");
    std::vector<Edge> edges;
    std::vector<GroupSet> frames;
    for (std::size_t j = 0; j < rank; ++j) {
      const auto& rec = recipes[j];
      if (!rec.gaps.empty() && rec.gaps.size() != rec.order.size())
        throw Error(ErrorKind::invalid_argument, "gap list must match the stacking order");
      Int pos = 0;
      for (std::size_t a = 0; a < rec.order.size(); ++a) {
        const int src = rec.order[a];
        if (src < 0 || static_cast<std::size_t>(src) >= rank)
          throw Error(ErrorKind::invalid_argument, "stack rule source out of range");
        edges.push_back(Edge{src, GroupElement::scalar(pos), static_cast<int>(j)});
        pos += h[src];
        if (!rec.gaps.empty()) pos += rec.gaps[a];
      }
      frames.push_back(GroupSet::interval(0, pos));
    }
    sys.C.push_back(std::move(edges));
    sys.F.push_back(std::move(frames));
  };
  extend(s, horizon);
  return s;
}

RankKSystem r2(std::size_t horizon) {
  auto s = stacked_system("r2", 2, horizon, [](std::size_t, const std::vector<Int>&) {
    return std::vector<TowerRecipe>{{{0, 0, 1, 1}, {}}, {{1, 1, 0, 0}, {}}};
  });
  s.cert.spacer_free_tail = true;
  s.cert.total_measure = Rational(1);
  s.cert.note = "no spacers, all heights 4^n";
  return s;
}

RankKSystem r2s(std::size_t horizon) {
  return stacked_system("r2s", 2, horizon, [](std::size_t, const std::vector<Int>&) {
    return std::vector<TowerRecipe>{{{0, 0, 1, 1}, {0, 0, 0, 1}}, {{1, 1, 0, 0}, {}}};
  });
}

RankKSystem fb(std::size_t horizon) {
  auto s = stacked_system("fb", 2, horizon, [](std::size_t, const std::vector<Int>&) {
    return std::vector<TowerRecipe>{{{0, 0, 1}, {}}, {{1, 0}, {}}};
  });
  s.cert.spacer_free_tail = true;
  s.cert.total_measure = Rational(1);
  s.cert.note = "no spacers";
  return s;
}

std::vector<std::string> catalog_names() { return {"odometer", "chacon", "hk", "r2", "r2s", "fb", "z2lh"}; }

std::size_t default_horizon(const std::string& name) {
  if (name == "odometer") return 12;
  if (name == "chacon") return 15;
  if (name == "hk") return 14;
  if (name == "z2lh") return 4;
  if (name == "fb") return 60;
  if (name == "r2" || name == "r2s") return 10;
  throw Error(ErrorKind::invalid_argument, "unknown catalog system '" + name + "'");
}

CatalogSystem wrap(RankOneSystem sys) {
  CatalogSystem c;
  c.name = sys.name;
  c.rank_one = true;
  c.k = as_rank_k(sys);
  c.one = std::move(sys);
  return c;
}

CatalogSystem wrap(RankKSystem sys) {
  CatalogSystem c;
  c.name = sys.name;
  c.k = std::move(sys);
  return c;
}

CatalogSystem make_catalog(const std::string& name, const CatalogParams& params) {
  std::size_t horizon = default_horizon(name);
  long factor = 10;
  for (const auto& [key, value] : params) {
    if (key == "horizon") {
      if (sgn(value) < 0 || value > 100000) throw Error(ErrorKind::out_of_range, "horizon out of range");
      horizon = value.get_ui();
    } else if (key == "factor" && name == "z2lh") {
      if (sgn(value) <= 0 || !value.fits_slong_p()) throw Error(ErrorKind::out_of_range, "factor out of range");
      factor = value.get_si();
    } else {
      throw Error(ErrorKind::invalid_argument, "catalog '" + name + "' has no parameter '" + key + "'");
    }
  }
  if (name == "odometer") return wrap(odometer(horizon));
  if (name == "chacon") return wrap(chacon(horizon));
  if (name == "hk") return wrap(hk(horizon));
  if (name == "z2lh") return wrap(z2lh(horizon, factor));
  if (name == "r2") return wrap(r2(horizon));
  if (name == "r2s") return wrap(r2s(horizon));
  if (name == "fb") return wrap(fb(horizon));
  throw Error(ErrorKind::invalid_argument, "unknown catalog system '" + name + "'");
}

void extend(CatalogSystem& sys, std::size_t horizon) {
  if (sys.rank_one) {
    if (sys.one.horizon() >= horizon) return;
    extend(sys.one, horizon);
    sys.k = as_rank_k(sys.one);
  } else {
    extend(sys.k, horizon);
  }
}

}  // namespace cflab
