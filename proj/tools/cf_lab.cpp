#include "cflab/bratteli.hpp"
#include "cflab/catalog.hpp"
#include "cflab/dsl.hpp"
#include "cflab/dynamics.hpp"
#include "cflab/finite_rank.hpp"
#include "cflab/rank_one.hpp"
#include "cflab/rigidity.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

using namespace cflab;
using nlohmann::json;

namespace {

struct Options {
  std::string system;
  std::optional<std::size_t> horizon;
  std::size_t depth = 0;
  std::size_t l = 2;
  std::size_t n = 0;
  std::string A = "base", B = "base";
  double tolerance = 1e-9;
  std::string json_out;
  std::string csv_out;
  std::string g;
  std::vector<std::string> gens;
  std::string a = "0", b = "0";
  std::string shifts;
  std::string window;
  std::string cuts;
  std::string policy = "wrap";
  std::string format = "dot";
  std::string out;
  std::string tie;
  std::string times;
  std::string mode = "full";
  std::string bound;
  std::string override_c;
  std::string perturb;
  std::string spacers, top = "0";
  std::size_t ncuts = 2;
  std::size_t castle_level = 1, last_stage = 4;
  std::optional<std::size_t> permute;
  std::size_t tower = 1;
  std::string position = "0";
  std::string op, X, Y;
  std::string file;
  std::size_t show = 4;
};

// ---- formatting

std::string dec(const Rational& r) {
  std::ostringstream os;
  os << std::setprecision(10) << to_double(r);
  return os.str();
}

struct Cell {
  std::string text;
  json value;
};

Cell cell(const Rational& r) {
  std::string t = to_string(r);
  if (r.get_den() != 1) t += " (" + dec(r) + ")";
  return {t, to_string(r)};
}
Cell cell(const CertifiedValue& v) {
  return {"[" + to_string(v.lo) + ", " + to_string(v.hi) + "] ~ [" + dec(v.lo) + ", " + dec(v.hi) + "]",
          json{{"lo", to_string(v.lo)}, {"hi", to_string(v.hi)}, {"lo_approx", to_double(v.lo)},
               {"hi_approx", to_double(v.hi)}}};
}
Cell cell(const Int& v) { return {v.get_str(), v.get_str()}; }
Cell cell(const std::string& s) { return {s, s}; }
Cell cell(const char* s) { return {s, s}; }
Cell cell(std::size_t v) { return {std::to_string(v), v}; }
Cell cell(int v) { return {std::to_string(v), v}; }
Cell cell(bool v) { return {v ? "yes" : "no", v}; }
Cell cell(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return {os.str(), v};
}

class Report {
 public:
  explicit Report(const std::string& command) {
    j_["command"] = command;
    for (const char* k : {"inputs", "results", "verdicts", "provenance"}) j_[k] = json::object();
    command_ = command;
  }
  void input(const std::string& k, const Cell& c) { add("inputs", k, c); }
  void result(const std::string& k, const Cell& c) { add("results", k, c); }
  void provenance(const std::string& k, const Cell& c) { add("provenance", k, c); }
  void verdict(const std::string& k, bool pass, const std::string& detail = "") {
    j_["verdicts"][k] = {{"pass", pass}, {"detail", detail}};
    text_.push_back({"verdicts", k, std::string(pass ? "PASS" : "FAIL") + (detail.empty() ? "" : "  " + detail)});
    failed_ = failed_ || !pass;
  }
  void table(const std::string& name, const std::vector<std::string>& header, const std::vector<std::vector<Cell>>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
      json o = json::object();
      for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) o[header[i]] = r[i].value;
      arr.push_back(o);
    }
    j_["results"][name] = arr;
    tables_.push_back({name, header, rows});
  }
  void note(const std::string& s) {
    j_["notes"].push_back(s);
    notes_.push_back(s);
  }
  bool failed() const { return failed_; }
  const json& data() const { return j_; }

  void print(std::ostream& os) const {
    os << command_ << "\n";
    for (const char* sec : {"inputs", "provenance", "results", "verdicts"}) {
      std::size_t w = 0;
      for (const auto& t : text_)
        if (t.section == sec) w = std::max(w, t.key.size());
      bool any = false;
      for (const auto& t : text_) {
        if (t.section != sec) continue;
        if (!any) os << sec << "\n";
        any = true;
        os << "  " << std::left << std::setw(static_cast<int>(w)) << t.key << "  " << t.text << "\n";
      }
    }
    for (const auto& tb : tables_) {
      os << tb.name << "\n";
      std::vector<std::size_t> w(tb.header.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = tb.header[i].size();
      for (const auto& r : tb.rows)
        for (std::size_t i = 0; i < w.size() && i < r.size(); ++i) w[i] = std::max(w[i], r[i].text.size());
      auto line = [&](const std::vector<std::string>& cols) {
        os << " ";
        for (std::size_t i = 0; i < cols.size(); ++i)
          os << " " << std::left << std::setw(i + 1 < cols.size() ? static_cast<int>(w[i]) : 0) << cols[i];
        os << "\n";
      };
      line(tb.header);
      for (const auto& r : tb.rows) {
        std::vector<std::string> cols;
        for (const auto& c : r) cols.push_back(c.text);
        line(cols);
      }
    }
    for (const auto& n : notes_) os << "note: " << n << "\n";
  }

 private:
  struct Row {
    std::string section, key, text;
  };
  struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
  };
  void add(const std::string& sec, const std::string& k, const Cell& c) {
    j_[sec][k] = c.value;
    text_.push_back({sec, k, c.text});
  }
  json j_;
  std::string command_;
  std::vector<Row> text_;
  std::vector<Table> tables_;
  std::vector<std::string> notes_;
  bool failed_ = false;
};

// ---- input parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

Int parse_int(const std::string& s) {
  std::string t = trim(s);
  if (!t.empty() && t[0] == '+') t = t.substr(1);
  Int v;
  if (t.empty() || v.set_str(t, 10) != 0) throw Error(ErrorKind::invalid_argument, "not an integer: '" + s + "'");
  return v;
}

std::size_t parse_size(const std::string& s) {
  Int v = parse_int(s);
  if (v < 0 || !v.fits_ulong_p()) throw Error(ErrorKind::invalid_argument, "not a level: '" + s + "'");
  return v.get_ui();
}

// "3", "1,2", "1;2", "(1,2)"
GroupElement parse_element(std::string s, std::size_t dim) {
  s = trim(s);
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::replace(s.begin(), s.end(), ';', ',');
  std::vector<Int> c;
  for (const auto& part : split(s, ',')) c.push_back(parse_int(part));
  if (c.size() != dim)
    throw Error(ErrorKind::dimension_mismatch,
                "element '" + s + "' has " + std::to_string(c.size()) + " coordinates, expected " + std::to_string(dim));
  return GroupElement(c);
}

// "{0,1,3}", "{(0,1),(2,3)}", "[0,10)x[0,10)"
GroupSet parse_set(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
    std::string body = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : body) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    if (parts.empty()) throw Error(ErrorKind::invalid_argument, "empty set needs a dimension");
    std::size_t dim = trim(parts[0]).front() == '(' ? split(parts[0], ',').size() : 1;
    std::vector<GroupElement> el;
    for (const auto& p : parts) el.push_back(parse_element(p, dim));
    return GroupSet(dim, el);
  }
  GroupElement lo;
  std::vector<Int> ext, los;
  for (const auto& f : split(s, 'x')) {
    std::string t = trim(f);
    if (t.size() < 2 || t.front() != '[' || t.back() != ')')
      throw Error(ErrorKind::invalid_argument, "bad set '" + s + "': use {..} or [a,b)x[c,d)");
    auto ab = split(t.substr(1, t.size() - 2), ',');
    if (ab.size() != 2) throw Error(ErrorKind::invalid_argument, "bad interval '" + t + "'");
    Int a = parse_int(ab[0]), b = parse_int(ab[1]);
    los.push_back(a);
    ext.push_back(b > a ? Int(b - a) : Int(0));
  }
  return GroupSet::box(Box(GroupElement(los), ext));
}

std::vector<std::size_t> parse_levels(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_size(p));
  return out;
}

// "a..b" inclusive, or a comma list (d = 1)
std::vector<Int> parse_range(const std::string& s) {
  std::vector<Int> out;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    Int a = parse_int(s.substr(0, dots)), b = parse_int(s.substr(dots + 2));
    for (Int x = a; x <= b; ++x) out.push_back(x);
    return out;
  }
  for (const auto& p : split(s, ',')) out.push_back(parse_int(p));
  return out;
}

EscapePolicy parse_policy(const std::string& s) {
  if (s == "wrap") return EscapePolicy::wrap_if_certified;
  if (s == "charge") return EscapePolicy::charge;
  throw Error(ErrorKind::invalid_argument, "policy must be 'wrap' or 'charge'");
}

struct Loaded {
  CatalogSystem sys;
  std::string source;  // catalog name or file path
};

Loaded load(const Options& o, std::size_t at_least = 0) {
  if (o.system.empty()) throw Error(ErrorKind::invalid_argument, "--system is required");
  Loaded L;
  L.source = o.system;
  std::size_t horizon;
  if (std::filesystem::exists(o.system)) {
    std::ifstream in(o.system);
    std::stringstream ss;
    ss << in.rdbuf();
    SystemDescription d = parse_description(ss.str());
    if (o.horizon && !d.is_catalog) d.horizon = *o.horizon;
    if (o.horizon && d.is_catalog) {
      auto it = std::find_if(d.params.begin(), d.params.end(), [](const auto& p) { return p.first == "horizon"; });
      if (it != d.params.end())
        it->second = static_cast<unsigned long>(*o.horizon);
      else
        d.params.emplace_back("horizon", static_cast<unsigned long>(*o.horizon)), d.param_pos.push_back({});
    }
    L.sys = build_system(d);
    horizon = L.sys.k.horizon();
  } else {
    CatalogParams p;
    if (o.horizon) p.emplace_back("horizon", static_cast<unsigned long>(*o.horizon));
    L.sys = make_catalog(o.system, p);
    horizon = L.sys.k.horizon();
  }
  if (at_least > horizon) extend(L.sys, at_least);
  return L;
}

const RankOneSystem& need_one(const Loaded& L, const std::string& what) {
  if (!L.sys.rank_one) throw Error(ErrorKind::unsupported_shape, what + " needs a rank-one system");
  return L.sys.one;
}

void describe(Report& r, const Loaded& L) {
  r.input("system", cell(L.source));
  r.provenance("horizon", cell(L.sys.k.horizon()));
  r.provenance("rank", cell(L.sys.k.rank));
  r.provenance("dim", cell(L.sys.k.dim));
}

// Cylinder selectors:
//   base | level=N,cells=C+C | level=N,tower=J[,base] | level=N,full
// with cells "p", "p:j" (1-based tower), coordinates separated by ';'.
MarkedCylinder select(const RankKSystem& sys, const std::string& text) {
  std::optional<std::size_t> level, tower;
  std::string cells;
  bool base = false, full = false;
  for (const auto& f : split(text, ',')) {
    std::string t = trim(f);
    if (t == "base")
      base = true;
    else if (t == "full")
      full = true;
    else if (t.rfind("level=", 0) == 0)
      level = parse_size(t.substr(6));
    else if (t.rfind("tower=", 0) == 0)
      tower = parse_size(t.substr(6));
    else if (t.rfind("cells=", 0) == 0)
      cells = t.substr(6);
    else
      throw Error(ErrorKind::invalid_argument, "bad selector field '" + t + "'");
  }
  if (tower && (*tower < 1 || *tower > sys.rank)) throw Error(ErrorKind::out_of_range, "tower out of range");
  if (level && *level > sys.horizon()) throw Error(ErrorKind::out_of_range, "selector level beyond horizon");
  if (base && !tower && cells.empty()) {
    MarkedCylinder c = base_cylinder(sys);
    return level ? refine_k(sys, c, *level) : c;
  }
  if (!level) throw Error(ErrorKind::invalid_argument, "selector needs level=N");
  MarkedCylinder c{*level, std::vector<GroupSet>(sys.rank, GroupSet(sys.dim))};
  if (!cells.empty()) {
    std::vector<MarkedElement> el;
    for (const auto& part : split(cells, '+')) {
      auto colon = part.find(':');
      int mark = 0;
      if (colon != std::string::npos) {
        std::size_t m = parse_size(part.substr(colon + 1));
        if (m < 1 || m > sys.rank) throw Error(ErrorKind::out_of_range, "tower mark out of range in '" + part + "'");
        mark = static_cast<int>(m) - 1;
      }
      el.push_back({parse_element(part.substr(0, colon), sys.dim), mark});
    }
    return marked_cells(sys, *level, el);
  }
  if (tower && base) {
    MarkedCylinder r = refine_k(sys, base_cylinder(sys), *level);
    for (std::size_t j = 0; j < sys.rank; ++j)
      if (j + 1 != *tower) r.support[j] = GroupSet(sys.dim);
    return r;
  }
  if (tower) {
    c.support[*tower - 1] = sys.F[*level][*tower - 1];
    return c;
  }
  if (full) {
    for (std::size_t j = 0; j < sys.rank; ++j) c.support[j] = sys.F[*level][j];
    return c;
  }
  throw Error(ErrorKind::invalid_argument, "selector needs cells=, tower= or full");
}

Cylinder select_one(const RankOneSystem& sys, const std::string& text) {
  MarkedCylinder m = select(as_rank_k(sys), text);
  return Cylinder{m.level, m.support[0]};
}

std::string support_str(const MarkedCylinder& c) {
  std::string s;
  for (std::size_t j = 0; j < c.support.size(); ++j) {
    if (c.support.size() > 1) s += (j ? "  " : "") + std::string("tower ") + std::to_string(j + 1) + ": ";
    s += c.support[j].str();
  }
  return s;
}

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.source + 1) + "," + e.g.str() + "," + std::to_string(e.target + 1) + ")";
}

// ---- commands

int cmd_catalog(const Options&, Report& r) {
  std::vector<std::vector<Cell>> rows;
  for (const auto& name : catalog_names()) {
    CatalogSystem s = make_catalog(name, {{"horizon", 1}});
    std::string cert = s.k.cert.total_measure ? "total measure " + to_string(*s.k.cert.total_measure)
                       : s.k.cert.infinite_measure ? "infinite measure"
                                                   : "none";
    if (s.k.cert.spacer_free_tail) cert += ", spacer-free";
    rows.push_back({cell(name), cell(s.k.rank), cell(s.k.dim), cell(default_horizon(name)), cell(cert)});
  }
  r.table("catalog", {"name", "rank", "dim", "horizon", "certificate"}, rows);
  return 0;
}

int cmd_parse(const Options& o, Report& r) {
  std::ifstream in(o.file);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot read " + o.file);
  std::stringstream ss;
  ss << in.rdbuf();
  SystemDescription d = parse_system(ss.str());
  r.input("file", cell(o.file));
  r.result("canonical", cell(print(d)));
  SystemDescription again = parse_description(print(d));
  r.verdict("round_trip", structurally_equal(d, again));
  return 0;
}

int cmd_validate(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  ValidationReport rep;
  if (L.sys.rank_one) {
    RankOneSystem s = L.sys.one;
    if (!o.override_c.empty()) {
      auto eq = o.override_c.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::invalid_argument, "--override-c takes LEVEL=SET");
      std::size_t n = parse_size(o.override_c.substr(0, eq));
      if (n < 1 || n > s.horizon()) throw Error(ErrorKind::out_of_range, "override level out of range");
      s.C[n] = parse_set(o.override_c.substr(eq + 1));
      r.input("override_c", cell(o.override_c));
    }
    rep = validate(s);
  } else {
    RankKSystem s = L.sys.k;
    if (!o.perturb.empty()) {
      auto p = split(o.perturb, ',');
      if (p.size() != 3) throw Error(ErrorKind::invalid_argument, "--perturb takes LEVEL,EDGE,DELTA");
      std::size_t n = parse_size(p[0]), e = parse_size(p[1]);
      if (n < 1 || n > s.horizon() || e < 1 || e > s.C[n].size())
        throw Error(ErrorKind::out_of_range, "perturbed edge out of range");
      s.C[n][e - 1].g[0] += parse_int(p[2]);
      r.input("perturb", cell(o.perturb));
    }
    rep = validate_rank_k(s);
  }
  std::vector<std::vector<Cell>> rows;
  for (const auto& c : rep.results)
    rows.push_back({cell(to_string(c.condition)), cell(c.level), cell(c.pass ? "pass" : "FAIL"), cell(c.witness)});
  r.table("conditions", {"condition", "level", "result", "witness"}, rows);
  for (const auto& n : rep.notes) r.note(n);
  const ConditionResult* bad = rep.first_failure();
  r.verdict("all_pass", !bad,
            bad ? std::string("(") + to_string(bad->condition) + ") at level " + std::to_string(bad->level) + ": " +
                      bad->witness
                : "");
  return 0;
}

int cmd_measure(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  r.input("A", cell(o.A));
  if (L.sys.rank_one) {
    const RankOneSystem& s = L.sys.one;
    Cylinder c = select_one(s, o.A);
    r.result("level", cell(c.level));
    r.result("measure", cell(measure(s, c)));
    if (o.depth > c.level) {
      Cylinder f = refine(s, c, o.depth);
      r.result("refined_level", cell(f.level));
      r.result("refined_support", cell(f.support.str()));
      r.result("refined_measure", cell(measure(s, f)));
      r.verdict("refine_preserves_measure", measure(s, f) == measure(s, c));
    }
    return 0;
  }
  const RankKSystem& s = L.sys.k;
  InvariantMeasure lam = solve_invariant_measure(s, o.tolerance);
  MarkedCylinder c = select(s, o.A);
  r.result("level", cell(c.level));
  r.result("measure", cell(cylinder_measure_k(s, lam, c)));
  r.provenance("measure_certificate", cell(lam.certificate));
  if (o.depth > c.level) {
    MarkedCylinder f = refine_k(s, c, o.depth);
    r.result("refined_support", cell(support_str(f)));
    r.result("refined_measure", cell(cylinder_measure_k(s, lam, f)));
  }
  return 0;
}

int cmd_trend(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  std::vector<std::vector<Cell>> rows;
  if (L.sys.rank_one) {
    std::optional<Rational> ub;
    if (!o.bound.empty()) ub = parse_rational(o.bound);
    MeasureTrend t = total_measure_trend(L.sys.one, ub);
    for (std::size_t n = 0; n < t.values.size(); ++n) rows.push_back({cell(n), cell(t.values[n])});
    r.table("trend", {"n", "value"}, rows);
    r.result("verdict", cell(to_string(t.verdict)));
    if (t.limit) r.result("limit", cell(*t.limit));
    r.result("reason", cell(t.reason));
    return 0;
  }
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  FinitenessTrend t = check_finiteness_k(L.sys.k, lam);
  for (std::size_t n = 0; n < t.values.size(); ++n) rows.push_back({cell(n), cell(t.values[n])});
  r.table("trend", {"n", "value"}, rows);
  r.result("verdict", cell(to_string(t.verdict)));
  r.result("reason", cell(t.reason));
  return 0;
}

int cmd_action(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  GroupElement g = parse_element(o.g, L.sys.k.dim);
  r.input("g", cell(g.str()));
  r.input("mode", cell(o.mode));
  std::vector<std::vector<Cell>> rows;
  if (o.mode == "full") {
    auto res = check_full_action(need_one(L, "full action"), g);
    for (std::size_t n = 0; n < res.size(); ++n)
      rows.push_back({cell(n), res[n] ? cell(*res[n]) : cell("not found")});
    r.table("least_m", {"n", "m"}, rows);
    return 0;
  }
  if (o.mode != "ae") throw Error(ErrorKind::invalid_argument, "--mode must be full or ae");
  if (L.sys.rank_one) {
    for (const auto& x : check_ae_action(L.sys.one, g, o.n)) rows.push_back({cell(x.n), cell(x.m), cell(x.ratio)});
    r.table("ratios", {"n", "m", "ratio"}, rows);
    return 0;
  }
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  for (const auto& x : check_ae_action_k(L.sys.k, lam, g))
    if (x.n == o.n) rows.push_back({cell(x.n), cell(x.m), cell(x.ratio)});
  r.table("ratios", {"n", "m", "ratio"}, rows);
  return 0;
}

int cmd_expansions(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  const RankOneSystem& s = need_one(L, "expansions");
  GroupElement g = parse_element(o.g, s.dim), a = parse_element(o.a, s.dim), b = parse_element(o.b, s.dim);
  r.input("g", cell(g.str()));
  r.input("a", cell(a.str()));
  r.input("b", cell(b.str()));
  r.input("n", cell(o.n));
  r.provenance("depth", cell(o.depth));
  ExpansionResult e = return_expansions(s, g, a, b, o.n, o.depth);
  std::vector<std::vector<Cell>> rows;
  for (const auto& x : e.expansions) {
    std::string digits;
    for (std::size_t i = 0; i < x.c.size(); ++i)
      digits += (i ? " " : "") + std::string("(") + x.c[i].str() + "," + x.d[i].str() + ")";
    rows.push_back({cell(x.level), cell(digits)});
  }
  r.table("expansions", {"level", "digits (c,d) per level"}, rows);
  r.result("value", cell(e.value));
  r.result("empty_product", cell(e.empty_product));
  return 0;
}

int cmd_telescope(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  std::vector<std::size_t> cuts = parse_levels(o.cuts);
  r.input("cuts", cell(o.cuts));
  std::vector<std::vector<Cell>> rows;
  if (L.sys.rank_one) {
    RankOneSystem t = telescope(L.sys.one, cuts);
    for (std::size_t n = 1; n <= t.horizon(); ++n) rows.push_back({cell(n), cell(t.C[n].str()), cell(t.F[n].str())});
    r.table("telescoped", {"n", "C", "F"}, rows);
    return 0;
  }
  RankKSystem t = telescope_k(L.sys.k, cuts);
  for (std::size_t n = 1; n <= t.horizon(); ++n) {
    RMatrix m = r_matrix(t, n);
    std::string s;
    for (const auto& row : m) {
      std::string x;
      for (const auto& v : row) x += (x.empty() ? "" : ",") + v.get_str();
      s += "[" + x + "]";
    }
    rows.push_back({cell(n), cell("[" + s + "]")});
  }
  r.table("telescoped", {"n", "r"}, rows);
  return 0;
}

int cmd_thin(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  const RankOneSystem& s = need_one(L, "thin");
  std::vector<GroupElement> gens;
  for (const auto& x : o.gens) gens.push_back(parse_element(x, s.dim));
  ThinResult t = thin(s, gens);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 1; n < t.densities.size(); ++n)
    rows.push_back({cell(n), cell(t.system.C[n].str()), cell(t.densities[n]), cell(static_cast<bool>(t.meets_threshold[n]))});
  r.table("thinned", {"n", "C'", "density", "meets_threshold"}, rows);
  if (!t.note.empty()) r.note(t.note);
  return 0;
}

int cmd_holes(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  const RankOneSystem& s = need_one(L, "holes");
  std::vector<GroupElement> gens;
  for (const auto& x : o.gens) gens.push_back(parse_element(x, s.dim));
  std::vector<std::vector<Cell>> rows;
  bool all = true;
  for (const auto& g : gens)
    for (std::size_t n = 0; n < s.horizon(); ++n) {
      HolesResult h = large_holes_check(s, g, n);
      all = all && h.pass;
      rows.push_back({cell(g.str()), cell(n), cell(h.pass ? "pass" : "FAIL"), cell(h.witness ? h.witness->str() : "")});
    }
  r.table("holes", {"g", "n", "result", "witness"}, rows);
  r.verdict("all_pass", all);
  return 0;
}

int cmd_windows(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  const RankOneSystem& s = need_one(L, "windows");
  std::vector<GroupElement> shifts;
  for (const auto& x : parse_range(o.shifts.empty() ? "0" : o.shifts)) shifts.push_back(GroupElement::scalar(x));
  auto counts = convolution_window_counts(s, o.l, o.n, o.depth, shifts);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t i = 0; i < shifts.size(); ++i) rows.push_back({cell(shifts[i].str()), cell(counts[i])});
  r.input("l", cell(o.l));
  r.input("n", cell(o.n));
  r.provenance("depth", cell(o.depth));
  r.table("counts", {"h", "count"}, rows);
  return 0;
}

// "2h+1", "0", "3h"
Int spacer_expr(const std::string& s, const Int& h) {
  Int v = 0;
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  for (const auto& term : split(t, '+')) {
    if (term.empty()) throw Error(ErrorKind::invalid_argument, "bad spacer expression '" + s + "'");
    if (term.back() == 'h') {
      std::string k = term.substr(0, term.size() - 1);
      v += (k.empty() ? Int(1) : parse_int(k)) * h;
    } else {
      v += parse_int(term);
    }
  }
  return v;
}

int cmd_cutstack(const Options& o, Report& r) {
  const std::size_t horizon = o.horizon.value_or(6);
  std::vector<std::string> sp = o.spacers.empty() ? std::vector<std::string>(o.ncuts, "0") : split(o.spacers, ',');
  RankOneSystem s = build_cut_and_stack(horizon, [&](std::size_t, const Int& h) {
    CutStage st;
    st.cuts = o.ncuts;
    for (const auto& x : sp) st.spacers.push_back(spacer_expr(x, h));
    st.top = spacer_expr(o.top, h);
    return st;
  });
  r.input("cuts", cell(o.ncuts));
  r.input("spacers", cell(o.spacers.empty() ? "0" : o.spacers));
  r.input("top", cell(o.top));
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 1; n <= s.horizon(); ++n) rows.push_back({cell(n), cell(s.C[n].str()), cell(s.F[n].str())});
  r.table("stages", {"n", "C", "F"}, rows);
  r.verdict("valid", validate(s).all_pass());
  return 0;
}

int cmd_solve(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  r.provenance("tolerance", cell(o.tolerance));
  r.result("certificate", cell(lam.certificate));
  r.result("vertices", cell(lam.vertices()));
  r.result("contraction_bound", cell(lam.contraction_bound));
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 0; n <= std::min(o.show, lam.horizon); ++n)
    for (std::size_t i = 0; i < lam.rank; ++i) rows.push_back({cell(n), cell(static_cast<int>(i + 1)), cell(lam.lambda[n][i])});
  r.table("lambda", {"n", "tower", "lambda"}, rows);
  if (lam.rank >= 2) {
    std::vector<Rational> num(lam.rank, 0), den(lam.rank, 0);
    num[0] = 1;
    den[1] = 1;
    r.result("lambda0_ratio_1_2", cell(lam.ratio(0, num, 0, den)));
  }
  r.verdict("certified", lam.certified);
  return 0;
}

std::string matrix_str(const RMatrix& m) {
  std::string s;
  for (const auto& row : m) {
    std::string x;
    for (const auto& v : row) x += (x.empty() ? "" : ",") + v.get_str();
    s += "[" + x + "]";
  }
  return "[" + s + "]";
}

int cmd_matrix(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 1; n <= L.sys.k.horizon(); ++n) rows.push_back({cell(n), cell(matrix_str(r_matrix(L.sys.k, n)))});
  r.table("r", {"n", "r[source][target]"}, rows);
  return 0;
}

int cmd_castle(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  CastleView cv = castle_view(L.sys.k);
  if (o.n < 1 || o.n > cv.stages.size()) throw Error(ErrorKind::out_of_range, "--n must be a stage 1..horizon");
  const CastleStage& st = cv.stages[o.n - 1];
  std::vector<std::vector<Cell>> rows;
  for (std::size_t j = 0; j < st.towers.size(); ++j) {
    std::string pl, gaps;
    for (const auto& p : st.towers[j].placements)
      pl += (pl.empty() ? "" : " ") + std::string("(") + std::to_string(p.source + 1) + "," + p.offset.str() + ")";
    for (const auto& g : st.towers[j].gaps) gaps += (gaps.empty() ? "" : ",") + g.get_str();
    rows.push_back({cell(static_cast<int>(j + 1)), cell(st.heights[j]), cell(st.towers[j].bottom), cell(pl), cell(gaps)});
  }
  r.input("stage", cell(o.n));
  r.table("towers", {"tower", "height", "bottom", "placements (source,offset)", "gaps"}, rows);
  r.result("no_spacers", cell(no_spacers(st)));
  return 0;
}

int cmd_spacers(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  SpacerData sd = spacer_data(L.sys.k, o.n);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t j = 0; j < sd.towers.size(); ++j)
    for (std::size_t i = 0; i < sd.towers[j].positions.size(); ++i)
      rows.push_back({cell(static_cast<int>(j + 1)), cell(sd.towers[j].positions[i]),
                      sd.towers[j].roof[i] ? cell(*sd.towers[j].roof[i]) : cell("extends")});
  r.input("n", cell(o.n));
  r.table("roofs", {"tower", "position", "roof"}, rows);
  if (!sd.note.empty()) r.note(sd.note);
  return 0;
}

int cmd_balanced(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  BalancedReport b = balanced_diagnostics(L.sys.k, lam);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 0; n < b.Lambda.size() && n <= o.show; ++n)
    for (std::size_t i = 0; i < b.Lambda[n].size(); ++i)
      rows.push_back({cell(n), cell(static_cast<int>(i + 1)), cell(b.delta[n][i]), cell(b.Lambda[n][i])});
  r.table("levels", {"n", "tower", "delta", "Lambda"}, rows);
  r.result("threshold", cell(b.threshold));
  r.result("min_Lambda", cell(b.min_Lambda));
  r.verdict("balanced", b.balanced);
  return 0;
}

std::vector<GroupElement> shift_list(const Options& o, std::size_t dim) {
  std::vector<GroupElement> out;
  if (!o.shifts.empty()) {
    if (dim != 1) throw Error(ErrorKind::dimension_mismatch, "--shifts is for G = Z; use --g per shift");
    for (const auto& x : parse_range(o.shifts)) out.push_back(GroupElement::scalar(x));
  }
  for (const auto& x : o.gens) out.push_back(parse_element(x, dim));
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "no shifts given (--shifts a..b or --g)");
  return out;
}

int cmd_correlation(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  const RankKSystem& s = L.sys.k;
  InvariantMeasure lam = L.sys.rank_one ? rank_one_measure(L.sys.one, s.horizon()) : solve_invariant_measure(s, o.tolerance);
  MarkedCylinder A = select(s, o.A), B = select(s, o.B);
  auto shifts = shift_list(o, s.dim);
  auto vals = correlation_table(s, lam, A, B, shifts, o.depth, parse_policy(o.policy));
  r.input("A", cell(o.A));
  r.input("B", cell(o.B));
  r.provenance("depth", cell(o.depth));
  r.provenance("policy", cell(o.policy));
  std::vector<std::vector<Cell>> rows;
  for (std::size_t i = 0; i < shifts.size(); ++i) rows.push_back({cell(shifts[i].str()), cell(vals[i])});
  r.table("correlation", {"g", "mu(A cap T_g B)"}, rows);
  if (!o.csv_out.empty()) {
    std::ofstream csv(o.csv_out);
    csv << "g,lo,hi,lo_approx,hi_approx\n";
    for (std::size_t i = 0; i < shifts.size(); ++i)
      csv << '"' << shifts[i].str() << "\"," << to_string(vals[i].lo) << "," << to_string(vals[i].hi) << ","
          << dec(vals[i].lo) << "," << dec(vals[i].hi) << "\n";
  }
  return 0;
}

void correlation_report(Report& r, const CorrelationReport& c) {
  r.provenance("depth", cell(c.depth));
  r.provenance("window", cell(c.window.str()));
  r.result("mu_A", cell(c.mu_a));
  r.result("mu_B", cell(c.mu_b));
  r.result("numerator", cell(c.numerator));
  r.result("denominator", cell(c.denominator));
  r.result("ratio", cell(c.ratio));
  r.result("target", cell(c.target));
  r.result("ratio_width", cell(c.ratio.width()));
  if (c.target.exact() && sgn(c.target.lo) > 0) {
    Rational t = c.target.lo;
    Rational dev = std::max(abs(c.ratio.lo - t), abs(c.ratio.hi - t)) / t;
    r.result("max_relative_deviation", cell(dev));
  }
}

int cmd_wre(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  r.input("A", cell(o.A));
  r.input("B", cell(o.B));
  r.input("l", cell(o.l));
  r.provenance("policy", cell(o.policy));
  if (L.sys.rank_one) {
    const RankOneSystem& s = L.sys.one;
    correlation_report(r, wre_ratio_rank_one(s, select_one(s, o.A), select_one(s, o.B), o.l, o.depth, parse_policy(o.policy)));
    return 0;
  }
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  correlation_report(r, wre_ratio_rank_k(L.sys.k, lam, select(L.sys.k, o.A), select(L.sys.k, o.B), o.l, o.depth,
                                         parse_policy(o.policy)));
  return 0;
}

int cmd_an(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  const RankKSystem& s = L.sys.k;
  InvariantMeasure lam = L.sys.rank_one ? rank_one_measure(L.sys.one, s.horizon()) : solve_invariant_measure(s, o.tolerance);
  auto w = parse_range(o.window);
  if (w.empty() || s.dim != 1) throw Error(ErrorKind::invalid_argument, "--window a..b (G = Z)");
  Box win = Box::interval(w.front(), w.back() + 1);
  r.input("Y", cell(o.A));
  r.input("window", cell(win.str()));
  r.provenance("depth", cell(o.depth));
  r.result("a_n", cell(a_n(s, lam, select(s, o.A), win, o.depth, parse_policy(o.policy))));
  return 0;
}

int cmd_bound(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  r.input("A", cell(o.A));
  r.input("B", cell(o.B));
  r.input("l", cell(o.l));
  r.provenance("depth", cell(o.depth));
  BoundCheck b;
  if (L.sys.rank_one) {
    const RankOneSystem& s = L.sys.one;
    b = bound_check_rank_one(s, select_one(s, o.A), select_one(s, o.B), o.l, o.depth, o.tolerance);
  } else {
    InvariantMeasure lam = solve_invariant_measure(L.sys.k, 1e-9);
    b = bound_check_rank_k(L.sys.k, lam, select(L.sys.k, o.A), select(L.sys.k, o.B), o.l, o.depth, o.tolerance);
  }
  r.result("ratio", cell(b.ratio));
  r.result("bound", cell(b.bound));
  r.verdict("within_bound", b.pass);
  return 0;
}

int cmd_abelian(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  const RankOneSystem& s = need_one(L, "abelian");
  r.input("A", cell(o.A));
  r.input("B", cell(o.B));
  r.input("n", cell(o.n));
  CorrelationReport c = abelian_window_sums(s, select_one(s, o.A), select_one(s, o.B), o.n, o.depth);
  correlation_report(r, c);
  if (c.denominator_identity) {
    r.result("denominator_expected", cell(c.denominator_expected));
    r.verdict("denominator_equals_C", *c.denominator_identity);
  }
  return 0;
}

int cmd_exactness(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  ExactnessReport e = exactness_check(L.sys.k, lam);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 0; n < e.min_tower_mass.size(); ++n)
    rows.push_back({cell(n), cell(e.min_tower_mass[n]), n ? cell(static_cast<bool>(e.no_spacers[n - 1])) : cell("")});
  r.table("levels", {"n", "min tower mass", "no spacers"}, rows);
  r.result("delta", cell(e.delta));
  r.verdict("exact", e.exact);
  return 0;
}

int cmd_quasi(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  QuasiExactReport q = quasi_exact_params(L.sys.k, lam);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t n = 0; n < q.stage_max_gap.size(); ++n) rows.push_back({cell(n + 1), cell(q.stage_max_gap[n])});
  r.table("stages", {"stage", "max gap"}, rows);
  r.result("R", cell(q.R));
  r.result("delta", cell(q.delta));
  r.result("bounded", cell(q.bounded));
  r.verdict("quasi_exact", q.quasi_exact);
  return 0;
}

int cmd_co(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  auto checks = co_condition(L.sys.k);
  std::vector<std::vector<Cell>> rows;
  for (const auto& c : checks)
    rows.push_back({cell(c.level), cell(static_cast<int>(c.tower + 1)), cell(c.pass ? "pass" : "FAIL"), cell(c.witness)});
  r.table("orders", {"stage", "tower", "result", "order"}, rows);
  RelaxedOrderReport rel = co_relaxed_condition(L.sys.k);
  r.result("R", cell(rel.R));
  r.result("L", cell(rel.L));
  r.result("relaxed_bounded", cell(rel.bounded));
  r.verdict("co", all_pass(checks));
  return 0;
}

int cmd_nondegeneracy(const Options& o, Report& r) {
  Loaded L = load(o);
  describe(r, L);
  auto checks = nondegeneracy_check(L.sys.k);
  std::vector<std::vector<Cell>> rows;
  for (const auto& c : checks)
    if (!c.pass) rows.push_back({cell(c.level), cell(static_cast<int>(c.source + 1)), cell(static_cast<int>(c.target + 1)), cell(c.value)});
  r.table("violations", {"level", "source", "target", "entry"}, rows);
  r.verdict("nondegenerate", all_pass(checks));
  return 0;
}

int cmd_rigidity(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  RigidityOptions opt;
  opt.policy = parse_policy(o.policy);
  if (!o.tie.empty())
    for (auto t : parse_levels(o.tie)) opt.tie_order.push_back(static_cast<int>(t) - 1);
  RigidityFinding f = find_rigidity_time(L.sys.k, lam, o.n, o.depth, opt);
  r.input("n", cell(o.n));
  r.provenance("depth", cell(o.depth));
  std::string chain;
  for (int j : f.chain) chain += (chain.empty() ? "" : ",") + std::to_string(j + 1);
  r.result("m_n", cell(f.time));
  r.result("tower", cell(f.tower + 1));
  r.result("chain", cell("[" + chain + "]"));
  r.result("scan_offset", cell(f.scan_offset));
  r.result("ratio", cell(f.ratio));
  r.result("guarantee", cell(f.guarantee));
  r.verdict("ratio_meets_guarantee", f.guarantee_met);
  return 0;
}

int cmd_co_times(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  auto fs = co_rigidity_times(L.sys.k, lam, o.castle_level, o.last_stage, o.depth);
  std::vector<std::vector<Cell>> rows;
  for (const auto& f : fs) rows.push_back({cell(f.stage), cell(f.heavy_tower + 1), cell(f.time), cell(f.min_ratio)});
  r.input("castle_level", cell(o.castle_level));
  r.input("last_stage", cell(o.last_stage));
  r.provenance("depth", cell(o.depth));
  r.table("times", {"stage", "heavy tower", "time", "min ratio"}, rows);
  return 0;
}

std::vector<Int> primes_upto(long n) {
  std::vector<Int> out;
  for (long p = 2; p <= n; ++p) {
    bool prime = true;
    for (long q = 2; q * q <= p && prime; ++q) prime = p % q != 0;
    if (prime) out.push_back(p);
  }
  return out;
}

int cmd_partial(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  InvariantMeasure lam = solve_invariant_measure(L.sys.k, o.tolerance);
  std::vector<Int> times;
  if (o.times.rfind("primes:", 0) == 0) {
    times = primes_upto(parse_int(o.times.substr(7)).get_si());
  } else if (o.times == "co") {
    for (const auto& f : co_rigidity_times(L.sys.k, lam, o.castle_level, o.last_stage, o.depth)) times.push_back(f.time);
  } else {
    times = parse_range(o.times);
  }
  PartialRigidityEstimate est =
      partial_rigidity_estimate(L.sys.k, lam, times, o.castle_level, o.depth, parse_policy(o.policy));
  std::string ts;
  for (const auto& t : times) ts += (ts.empty() ? "" : ",") + t.get_str();
  r.input("times", cell(ts));
  r.input("castle_level", cell(o.castle_level));
  r.provenance("depth", cell(o.depth));
  r.result("eta", cell(est.eta));
  return 0;
}

OrderedBratteliDiagram diagram_for(const Options& o, const Loaded& L, Report& r) {
  OrderedBratteliDiagram d = export_diagram(L.sys.k);
  if (o.permute) {
    d = permute_ranks(d, *o.permute);
    r.input("permute_level", cell(*o.permute));
  }
  return d;
}

int cmd_bratteli(const Options& o, Report& r, bool& raw) {
  Loaded L = load(o);
  OrderedBratteliDiagram d = diagram_for(o, L, r);
  std::string text = o.format == "json" ? to_json(d).dump(2) + "\n" : to_dot(d);
  if (o.format != "json" && o.format != "dot") throw Error(ErrorKind::invalid_argument, "--format must be dot or json");
  if (o.out.empty()) {
    std::cout << text;
    raw = true;
    return 0;
  }
  std::ofstream(o.out) << text;
  describe(r, L);
  r.result("written", cell(o.out));
  return 0;
}

int cmd_oracle(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  OrderedBratteliDiagram d = diagram_for(o, L, r);
  OracleReport rep = equivalence_oracle(L.sys.k, d, o.depth);
  r.provenance("depth", cell(o.depth));
  r.result("checked", cell(rep.checked));
  if (!rep.pass) r.result("counterexample", cell(rep.counterexample));
  r.verdict("successor_matches_shift", rep.pass);
  return 0;
}

int cmd_adic(const Options& o, Report& r) {
  Loaded L = load(o, o.depth);
  describe(r, L);
  OrderedBratteliDiagram d = export_diagram(L.sys.k);
  const int j = static_cast<int>(o.tower) - 1;
  Int p = parse_int(o.position);
  AdicPath path = path_of(L.sys.k, j, p, o.depth);
  r.input("tower", cell(o.tower));
  r.input("position", cell(p));
  r.provenance("level", cell(o.depth));
  r.result("path", cell(path_str(d, path)));
  auto succ = vershik_successor(d, path);
  r.result("successor", cell(succ ? path_str(d, *succ) : std::string("maximal")));
  if (p + 1 < L.sys.k.F[o.depth][j].size()) {
    AdicPath next = path_of(L.sys.k, j, p + 1, o.depth);
    r.result("path_of_next", cell(path_str(d, next)));
    r.verdict("successor_is_next", succ && *succ == next);
  }
  return 0;
}

int cmd_group(const Options& o, Report& r) {
  r.input("op", cell(o.op));
  GroupSet X = parse_set(o.X);
  r.input("X", cell(X.str()));
  if (o.op == "sumset" || o.op == "diffset") {
    GroupSet Y = parse_set(o.Y);
    r.input("Y", cell(Y.str()));
    GroupSet z = o.op == "sumset" ? sumset(X, Y) : diffset(X, Y);
    r.result("result", cell(z.str()));
    r.result("size", cell(z.size()));
  } else if (o.op == "folner") {
    GroupElement g = parse_element(o.g, X.dim());
    r.input("g", cell(g.str()));
    r.result("defect", cell(folner_defect(g, X)));
  } else if (o.op == "cover") {
    TranslateCover c = cover_by_translates(X);
    r.result("K", cell(c.k));
    r.result("offsets", cell(c.offsets.str()));
  } else if (o.op == "disjoint") {
    GroupSet Y = parse_set(o.Y);
    TranslateOverlap t = disjoint_translates(X, Y);
    if (t.witness) r.result("witness", cell("(" + t.witness->first.str() + "," + t.witness->second.str() + ")"));
    r.verdict("disjoint", t.disjoint);
  } else {
    throw Error(ErrorKind::invalid_argument, "--op must be sumset, diffset, folner, cover or disjoint");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cf-lab: (C,F)-systems toolkit"};
  app.require_subcommand(1);
  Options o;
  std::function<int(Report&)> run;
  bool raw = false;
  std::string command;
  std::map<CLI::App*, std::size_t> default_depth;

  auto sub = [&](const std::string& name, const std::string& help, auto fn) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--json", o.json_out, "write the JSON report to a path ('-' for stdout)");
    s->callback([&, s, name, fn] {
      command = name;
      if (auto it = default_depth.find(s); it != default_depth.end() && s->count("--depth") == 0) o.depth = it->second;
      run = [&, fn](Report& r) { return fn(o, r); };
    });
    return s;
  };
  auto sys = [&](CLI::App* s) {
    s->add_option("--system", o.system, "catalog name or DSL file")->required();
    s->add_option("--horizon", o.horizon, "number of stages to build");
    s->add_option("--tolerance", o.tolerance, "measure solver tolerance");
    return s;
  };
  auto cyl = [&](CLI::App* s) {
    s->add_option("--A", o.A, "cylinder selector");
    s->add_option("--B", o.B, "cylinder selector");
  };
  auto dep = [&](CLI::App* s, std::size_t def) {
    default_depth[s] = def;
    s->add_option("--depth", o.depth, "depth L of the tower model");
    s->add_option("--policy", o.policy, "escape policy: wrap or charge");
  };

  sub("catalog", "list built-in systems", cmd_catalog);
  sub("parse", "parse a DSL file and print its canonical form", cmd_parse)->add_option("file", o.file)->required();
  {
    auto* s = sys(sub("validate", "check the structural conditions", cmd_validate));
    s->add_option("--override-c", o.override_c, "replace C_L by a set, LEVEL=SET (rank one)");
    s->add_option("--perturb", o.perturb, "shift one edge offset, LEVEL,EDGE,DELTA (rank k, 1-based edge)");
  }
  {
    auto* s = sys(sub("measure", "measure of a cylinder, optionally refined", cmd_measure));
    s->add_option("--A", o.A, "cylinder selector");
    s->add_option("--depth", o.depth, "refine to this level");
  }
  sys(sub("trend", "total measure trend", cmd_trend))->add_option("--bound", o.bound, "user bound for finiteness");
  {
    auto* s = sys(sub("action", "full or almost-everywhere action checks", cmd_action));
    s->add_option("--g", o.g, "group element")->required();
    s->add_option("--n", o.n, "start level (ae mode)");
    s->add_option("--mode", o.mode, "full or ae");
  }
  {
    auto* s = sys(sub("expansions", "return-time expansions and value interval", cmd_expansions));
    s->add_option("--g", o.g, "group element")->required();
    s->add_option("--a", o.a, "cell position at level n");
    s->add_option("--b", o.b, "cell position at level n");
    s->add_option("--n", o.n, "base level");
    s->add_option("--depth", o.depth, "deepest level searched")->required();
  }
  sys(sub("telescope", "compose stages between cut levels", cmd_telescope))->add_option("--cuts", o.cuts, "comma list of cut levels starting at 0")->required();
  sys(sub("thin", "thin C-sets for generators", cmd_thin))->add_option("--g", o.gens, "generators")->required();
  sys(sub("holes", "large-holes condition per level", cmd_holes))->add_option("--g", o.gens, "generators")->required();
  {
    auto* s = sys(sub("windows", "convolution window counts", cmd_windows));
    s->add_option("--l", o.l, "cell level l");
    s->add_option("--n", o.n, "window level n");
    s->add_option("--depth", o.depth, "depth L")->required();
    s->add_option("--shifts", o.shifts, "a..b or list");
  }
  {
    auto* s = sub("cutstack", "build a rank-one system by cutting and stacking", cmd_cutstack);
    s->add_option("--cuts", o.ncuts, "number of copies per stage");
    s->add_option("--spacers", o.spacers, "comma list of terms like 0, 1, 2h, 2h+1");
    s->add_option("--top", o.top, "spacers above the last copy");
    s->add_option("--horizon", o.horizon, "number of stages");
  }
  sys(sub("solve", "invariant measure solver", cmd_solve))->add_option("--show", o.show, "levels to print");
  sys(sub("matrix", "incidence matrices", cmd_matrix));
  sys(sub("castle", "castle placements and gaps at a stage", cmd_castle))->add_option("--n", o.n, "stage")->required();
  sys(sub("spacers", "spacer roofs above base copies", cmd_spacers))->add_option("--n", o.n, "level")->required();
  sys(sub("balanced", "balanced-system diagnostics", cmd_balanced))->add_option("--show", o.show, "levels to print");
  {
    auto* s = sys(sub("correlation", "mu(A cap T_g B) per shift", cmd_correlation));
    cyl(s);
    dep(s, 6);
    s->add_option("--shifts", o.shifts, "a..b or list (G = Z)");
    s->add_option("--g", o.gens, "shift, repeatable");
    s->add_option("--csv", o.csv_out, "CSV output path");
  }
  {
    auto* s = sys(sub("wre", "weak rational ergodicity ratio", cmd_wre));
    cyl(s);
    dep(s, 12);
    s->add_option("--l", o.l, "level of the Folner window")->required();
  }
  {
    auto* s = sys(sub("an", "normalized window sum for one set", cmd_an));
    s->add_option("--Y", o.A, "cylinder selector");
    dep(s, 8);
    s->add_option("--window", o.window, "a..b")->required();
  }
  {
    auto* s = sys(sub("bound", "upper bound check for the window ratio", cmd_bound));
    cyl(s);
    default_depth[s] = 10;
    s->add_option("--depth", o.depth, "depth L of the tower model");
    s->add_option("--l", o.l, "level of the Folner window")->required();
  }
  {
    auto* s = sys(sub("abelian", "window sums over F_n - F_n", cmd_abelian));
    cyl(s);
    s->add_option("--n", o.n, "level of the window F_n - F_n")->required();
    s->add_option("--depth", o.depth, "depth L of the tower model")->required();
  }
  sys(sub("exactness", "exact castle check", cmd_exactness));
  sys(sub("quasi", "quasi-exact parameters", cmd_quasi));
  sys(sub("co", "consecutive-order condition", cmd_co));
  sys(sub("nondegeneracy", "no incidence entry equal to 1", cmd_nondegeneracy));
  {
    auto* s = sys(sub("rigidity", "greedy rigidity time at a stage", cmd_rigidity));
    s->add_option("--n", o.n, "stage")->required();
    dep(s, 8);
    s->add_option("--tie", o.tie, "tower preference for ties, 1-based");
  }
  {
    auto* s = sys(sub("co-times", "rigidity times under the order condition", cmd_co_times));
    s->add_option("--castle-level", o.castle_level, "castle level");
    s->add_option("--last-stage", o.last_stage, "last stage scanned");
    s->add_option("--depth", o.depth, "depth L of the tower model")->required();
  }
  {
    auto* s = sys(sub("partial", "partial rigidity estimate for given times", cmd_partial));
    s->add_option("--times", o.times, "list, a..b, primes:N or co")->required();
    s->add_option("--castle-level", o.castle_level, "castle level");
    s->add_option("--last-stage", o.last_stage, "last stage scanned");
    dep(s, 8);
  }
  {
    auto* s = app.add_subcommand("bratteli", "export the ordered diagram");
    sys(s);
    s->add_option("--format", o.format, "dot or json");
    s->add_option("--out", o.out, "output path");
    s->add_option("--permute", o.permute, "swap two order ranks at this level");
    s->callback([&] {
      command = "bratteli";
      run = [&](Report& r) { return cmd_bratteli(o, r, raw); };
    });
  }
  {
    auto* s = sys(sub("oracle", "exhaustive Vershik successor check", cmd_oracle));
    s->add_option("--depth", o.depth, "deepest level enumerated")->required();
    s->add_option("--permute", o.permute, "swap two order ranks at this level");
  }
  {
    auto* s = sys(sub("adic", "path of a tower position and its successor", cmd_adic));
    s->add_option("--tower", o.tower, "1-based tower");
    s->add_option("--position", o.position, "position inside the tower");
    s->add_option("--depth", o.depth, "depth of the path")->required();
  }
  {
    auto* s = sub("group", "finite subsets of Z^d", cmd_group);
    s->add_option("--op", o.op, "sumset, diffset, folner, cover, disjoint")->required();
    s->add_option("--X", o.X, "set, e.g. {0,1,3} or [0,4)x[0,2)")->required();
    s->add_option("--Y", o.Y, "second set");
    s->add_option("--g", o.g, "group element");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  Report report(command);
  int code = 0;
  try {
    code = run(report);
  } catch (const DslError& e) {
    std::cerr << "error " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (raw) return code;
  if (report.failed()) code = 2;
  if (o.json_out == "-") {
    std::cout << report.data().dump(2) << "\n";
  } else {
    report.print(std::cout);
    if (!o.json_out.empty()) std::ofstream(o.json_out) << report.data().dump(2) << "\n";
  }
  return code;
}
