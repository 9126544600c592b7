#include "cflab/dsl.hpp"

#include "cflab/finite_rank.hpp"
#include "cflab/rank_one.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace cflab {

DslError::DslError(SourcePos pos, const std::string& message, bool semantic)
    : Error(ErrorKind::parse, std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message),
      pos_(pos),
      message_(message),
      semantic_(semantic) {}

bool Linear::is_constant() const {
  return std::all_of(coeff.begin(), coeff.end(), [](const auto& kv) { return sgn(kv.second) == 0; });
}

Int Linear::eval(const std::map<std::string, Int>& env) const {
  Int v = constant;
  for (const auto& [s, c] : coeff) {
    if (sgn(c) == 0) continue;
    auto it = env.find(s);
    if (it == env.end()) throw Error(ErrorKind::invalid_argument, "symbol '" + s + "' has no value");
    v += c * it->second;
  }
  return v;
}

std::string Linear::str() const {
  std::string out;
  for (const auto& [s, c] : coeff) {
    if (sgn(c) == 0) continue;
    Int a = abs(c);
    std::string term = (a == 1 ? "" : a.get_str()) + s;
    if (out.empty())
      out = (sgn(c) < 0 ? "-" : "") + term;
    else
      out += (sgn(c) < 0 ? " - " : " + ") + term;
  }
  if (out.empty()) return constant.get_str();
  if (sgn(constant) > 0) out += " + " + constant.get_str();
  if (sgn(constant) < 0) out += " - " + Int(-constant).get_str();
  return out;
}

bool operator==(const Linear& a, const Linear& b) {
  if (a.constant != b.constant) return false;
  std::set<std::string> keys;
  for (const auto& kv : a.coeff) keys.insert(kv.first);
  for (const auto& kv : b.coeff) keys.insert(kv.first);
  for (const auto& k : keys) {
    auto x = a.coeff.count(k) ? a.coeff.at(k) : Int(0);
    auto y = b.coeff.count(k) ? b.coeff.at(k) : Int(0);
    if (x != y) return false;
  }
  return true;
}

namespace {

Linear negate(Linear a) {
  a.constant = -a.constant;
  for (auto& kv : a.coeff) kv.second = -kv.second;
  return a;
}

Linear add(Linear a, const Linear& b) {
  a.constant += b.constant;
  for (const auto& [s, c] : b.coeff) a.coeff[s] += c;
  for (auto it = a.coeff.begin(); it != a.coeff.end();)
    it = sgn(it->second) == 0 ? a.coeff.erase(it) : std::next(it);
  return a;
}

Linear scale(Linear a, const Int& k) {
  a.constant *= k;
  for (auto& kv : a.coeff) kv.second *= k;
  for (auto it = a.coeff.begin(); it != a.coeff.end();)
    it = sgn(it->second) == 0 ? a.coeff.erase(it) : std::next(it);
  return a;
}

enum class Tok { ident, integer, arrow, punct, newline, end };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  while (i < text.size()) {
    const char c = text[i];
    SourcePos p{line, col};
    if (c == '\n') {
      out.push_back({Tok::newline, "\n", p});
      ++i, ++line, col = 1;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i, ++col;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i, ++col;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::ident, text.substr(i, j - i), p});
      col += j - i, i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::integer, text.substr(i, j - i), p});
      col += j - i, i = j;
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::arrow, "->", p});
      i += 2, col += 2;
    } else if (std::string("[]{}(),+-*:=").find(c) != std::string::npos) {
      out.push_back({Tok::punct, std::string(1, c), p});
      ++i, ++col;
    } else {
      throw DslError(p, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::end, "", SourcePos{line, col}});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::newline) return "end of line";
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  SystemDescription run() {
    SystemDescription d;
    bool first = true;
    std::set<std::string> seen;
    SourcePos rank_pos;
    while (true) {
      while (peek().kind == Tok::newline) ++i_;
      if (peek().kind == Tok::end) break;
      const Token& head = peek();
      if (head.kind != Tok::ident) throw DslError(head.pos, "expected a statement, found " + describe(head));
      const std::string kw = head.text;
      static const std::set<std::string> known{"system", "catalog", "dim", "rank", "horizon", "C", "F"};
      if (!known.count(kw)) throw DslError(head.pos, "unknown statement '" + kw + "'");
      if (first && kw != "system" && kw != "catalog")
        throw DslError(head.pos, "description must start with 'system' or 'catalog'");
      if (!first && (kw == "system" || kw == "catalog")) throw DslError(head.pos, "duplicate statement '" + kw + "'");
      if (!first && d.is_catalog) throw DslError(head.pos, "catalog description takes no further statements");
      if (seen.count(kw)) throw DslError(head.pos, "duplicate statement '" + kw + "'");
      seen.insert(kw);
      first = false;
      ++i_;
      if (kw == "system" || kw == "catalog") {
        const Token& name = expect(Tok::ident, "a name");
        d.is_catalog = kw == "catalog";
        d.name = name.text;
        d.name_pos = name.pos;
        if (d.is_catalog) {
          while (peek().kind == Tok::ident) {
            const Token& key = next();
            expect_punct("=");
            bool neg = accept_punct("-");
            const Token& v = expect(Tok::integer, "an integer");
            Int value(v.text);
            if (neg) value = -value;
            for (const auto& [k, _] : d.params)
              if (k == key.text) throw DslError(key.pos, "duplicate parameter '" + key.text + "'");
            d.params.emplace_back(key.text, value);
            d.param_pos.push_back(key.pos);
          }
        }
      } else if (kw == "dim" || kw == "rank" || kw == "horizon") {
        expect_punct("=");
        const Token& v = expect(Tok::integer, "an integer");
        Int value(v.text);
        const long hi = kw == "dim" ? 8 : kw == "rank" ? 16 : 200;
        if (value < 1 || value > hi)
          throw DslError(v.pos, kw + " must be between 1 and " + std::to_string(hi));
        if (kw == "dim") d.dim = value.get_ui();
        if (kw == "rank") d.rank = value.get_ui(), rank_pos = head.pos;
        if (kw == "horizon") d.horizon = value.get_ui();
      } else {
        stage_index();
        expect_punct("=");
        if (kw == "C") {
          d.has_c = true;
          d.c_pos = head.pos;
          expect_punct("{");
          if (!accept_punct("}")) {
            do d.items.push_back(item());
            while (accept_punct(","));
            expect_punct("}");
          }
        } else {
          d.has_frame = true;
          d.f_pos = head.pos;
          if (peek().kind == Tok::punct && peek().text == "{") {
            ++i_;
            d.per_tower = true;
            do {
              const Token& t = expect(Tok::integer, "a tower number");
              expect_punct(":");
              TowerFrame tf;
              tf.tower = static_cast<int>(std::min<unsigned long>(Int(t.text).get_ui(), 1000000));
              tf.spec = frame_spec();
              tf.spec.pos = t.pos;
              for (const auto& o : d.tower_frames)
                if (o.tower == tf.tower) throw DslError(t.pos, "duplicate frame for tower " + t.text);
              d.tower_frames.push_back(tf);
            } while (accept_punct(","));
            expect_punct("}");
          } else {
            d.frame = frame_spec();
            d.frame.pos = head.pos;
          }
        }
      }
      if (peek().kind != Tok::newline && peek().kind != Tok::end)
        throw DslError(peek().pos, "expected end of line, found " + describe(peek()));
    }
    if (first) throw DslError(peek().pos, "description must start with 'system' or 'catalog'");
    if (d.is_catalog) return d;
    if (d.rank > 1 && d.dim > 1) throw DslError(rank_pos, "rank-k systems need dim = 1");
    if (!d.has_c) throw DslError(d.name_pos, "missing C[n+1] statement");
    check_symbols(d);
    check_shapes(d);
    return d;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::vector<std::pair<std::string, SourcePos>> uses_;
  std::vector<std::pair<std::size_t, SourcePos>> box_arity_;

  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) throw DslError(peek().pos, "expected " + what + ", found " + describe(peek()));
    return next();
  }
  void expect_punct(const std::string& p) {
    if (peek().kind != Tok::punct || peek().text != p)
      throw DslError(peek().pos, "expected '" + p + "', found " + describe(peek()));
    ++i_;
  }
  bool accept_punct(const std::string& p) {
    if (peek().kind == Tok::punct && peek().text == p) {
      ++i_;
      return true;
    }
    return false;
  }

  void stage_index() {
    expect_punct("[");
    const Token& n = expect(Tok::ident, "'n'");
    if (n.text != "n") throw DslError(n.pos, "expected 'n', found '" + n.text + "'");
    expect_punct("+");
    const Token& one = expect(Tok::integer, "'1'");
    if (one.text != "1") throw DslError(one.pos, "expected '1', found '" + one.text + "'");
    expect_punct("]");
  }

  bool starts_factor() const {
    const Token& t = peek();
    return t.kind == Tok::integer || t.kind == Tok::ident || (t.kind == Tok::punct && t.text == "(");
  }

  Linear expr() {
    Linear acc;
    if (accept_punct("-"))
      acc = negate(term());
    else {
      accept_punct("+");
      acc = term();
    }
    while (true) {
      if (accept_punct("+"))
        acc = add(acc, term());
      else if (accept_punct("-"))
        acc = add(acc, negate(term()));
      else
        return acc;
    }
  }

  Linear term() {
    Linear acc = factor();
    while (true) {
      bool star = accept_punct("*");
      if (!star && !starts_factor()) return acc;
      SourcePos p = peek().pos;
      Linear f = factor();
      if (!acc.is_constant() && !f.is_constant()) throw DslError(p, "nonlinear expression");
      acc = acc.is_constant() ? scale(f, acc.constant) : scale(acc, f.constant);
    }
  }

  Linear factor() {
    const Token& t = peek();
    if (t.kind == Tok::integer) {
      ++i_;
      Linear l;
      l.constant = Int(t.text);
      return l;
    }
    if (t.kind == Tok::ident) {
      ++i_;
      uses_.emplace_back(t.text, t.pos);
      Linear l;
      l.coeff[t.text] = 1;
      return l;
    }
    if (accept_punct("(")) {
      Linear l = expr();
      expect_punct(")");
      return l;
    }
    if (accept_punct("-")) return negate(factor());
    throw DslError(t.pos, "expected an expression, found " + describe(t));
  }

  OffsetItem item() {
    OffsetItem it;
    it.pos = peek().pos;
    if (peek().kind == Tok::integer && toks_[i_ + 1].kind == Tok::arrow) {
      const Token& s = next();
      ++i_;
      const Token& t = expect(Tok::integer, "a tower number");
      expect_punct(":");
      it.source = static_cast<int>(std::min<unsigned long>(Int(s.text).get_ui(), 1000000));
      it.target = static_cast<int>(std::min<unsigned long>(Int(t.text).get_ui(), 1000000));
    }
    if (peek().kind == Tok::punct && peek().text == "(" && tuple_ahead()) {
      ++i_;
      do it.coords.push_back(expr());
      while (accept_punct(","));
      expect_punct(")");
    } else {
      it.coords.push_back(expr());
    }
    return it;
  }

  // "(" starts a tuple when a top-level comma appears before its ")".
  bool tuple_ahead() const {
    int depth = 0;
    for (std::size_t j = i_; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.kind == Tok::newline || t.kind == Tok::end) return false;
      if (t.kind != Tok::punct) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")" && --depth == 0) return false;
      if (t.text == "," && depth == 1) return true;
    }
    return false;
  }

  FrameSpec frame_spec() {
    FrameSpec f;
    if (peek().kind == Tok::ident && peek().text == "hull") {
      ++i_;
      if (accept_punct("+"))
        f.extra = expr();
      else if (accept_punct("-"))
        f.extra = negate(expr());
      return f;
    }
    if (peek().kind == Tok::punct && peek().text == "[") {
      f.hull = false;
      SourcePos p = peek().pos;
      do {
        expect_punct("[");
        Linear a = expr();
        expect_punct(",");
        Linear b = expr();
        expect_punct(")");
        f.box.emplace_back(a, b);
      } while (peek().kind == Tok::ident && peek().text == "x" && (++i_, true));
      box_arity_.emplace_back(f.box.size(), p);
      return f;
    }
    throw DslError(peek().pos, "expected 'hull' or a box, found " + describe(peek()));
  }

  void check_symbols(const SystemDescription& d) {
    std::set<std::string> ok{"n"};
    if (d.rank == 1) {
      if (d.dim == 1) ok.insert({"h", "lo"});
      for (std::size_t i = 1; i <= d.dim; ++i) ok.insert({"h" + std::to_string(i), "lo" + std::to_string(i)});
    } else {
      for (std::size_t i = 1; i <= d.rank; ++i) ok.insert("h" + std::to_string(i));
    }
    for (const auto& [s, p] : uses_)
      if (!ok.count(s)) throw DslError(p, "unknown symbol '" + s + "'");
  }

  void check_shapes(const SystemDescription& d) {
    for (const auto& it : d.items) {
      if (d.rank == 1 && it.source) throw DslError(it.pos, "edge item in a rank-1 system");
      if (d.rank > 1 && !it.source) throw DslError(it.pos, "expected an edge item 'i -> j : offset'");
      if (it.source) {
        for (int m : {*it.source, *it.target})
          if (m < 1 || static_cast<std::size_t>(m) > d.rank)
            throw DslError(it.pos, "tower mark " + std::to_string(m) + " out of range 1.." + std::to_string(d.rank));
      }
      if (it.coords.size() != d.dim)
        throw DslError(it.pos, "offset has " + std::to_string(it.coords.size()) + " coordinates, expected " +
                                   std::to_string(d.dim));
    }
    if (!d.has_frame) return;
    if (d.per_tower && d.rank == 1) throw DslError(d.f_pos, "per-tower frames need rank > 1");
    for (const auto& [n, p] : box_arity_) {
      if (d.rank > 1) throw DslError(p, "box frames need rank = 1");
      if (n != d.dim)
        throw DslError(p, "box has " + std::to_string(n) + " factors, expected " + std::to_string(d.dim));
    }
    auto check_hull = [&](const FrameSpec& f) {
      if (f.hull && !(f.extra == Linear{}) && d.dim > 1) throw DslError(f.pos, "hull + offset needs dim = 1");
    };
    if (d.per_tower) {
      for (const auto& tf : d.tower_frames) {
        if (tf.tower < 1 || static_cast<std::size_t>(tf.tower) > d.rank)
          throw DslError(tf.spec.pos, "tower " + std::to_string(tf.tower) + " out of range 1.." + std::to_string(d.rank));
        check_hull(tf.spec);
      }
    } else {
      check_hull(d.frame);
    }
  }
};

std::string frame_str(const FrameSpec& f) {
  if (!f.hull) {
    std::string s;
    for (const auto& [a, b] : f.box) s += (s.empty() ? "" : " x ") + ("[" + a.str() + ", " + b.str() + ")");
    return s;
  }
  if (f.extra == Linear{}) return "hull";
  std::string e = f.extra.str();
  if (e[0] == '-') return "hull - " + negate(f.extra).str();
  return "hull + " + e;
}

bool same_frame(const FrameSpec& a, const FrameSpec& b) {
  return a.hull == b.hull && a.extra == b.extra && a.box == b.box;
}

[[noreturn]] void semantic(SourcePos pos, const ConditionResult& r) {
  throw DslError(pos, std::string("condition (") + to_string(r.condition) + ") fails at level " +
                          std::to_string(r.level) + ": witness " + r.witness,
                 true);
}

std::map<std::string, Int> env_rank_one(const GroupSet& f, std::size_t n) {
  std::map<std::string, Int> env{{"n", Int(static_cast<unsigned long>(n))}};
  Box b = *f.bbox();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    env["h" + std::to_string(i + 1)] = b.ext[i];
    env["lo" + std::to_string(i + 1)] = b.lo[i];
  }
  if (b.dim() == 1) env["h"] = b.ext[0], env["lo"] = b.lo[0];
  return env;
}

CatalogSystem build_rank_one(const SystemDescription& d) {
  RankOneSystem s;
  s.name = d.name;
  s.dim = d.dim;
  s.F.push_back(GroupSet::singleton(GroupElement(d.dim)));
  s.C.push_back(GroupSet(d.dim));
  s.grow = [d](RankOneSystem& sys) {
    const std::size_t n = sys.horizon();
    const GroupSet& fn = sys.F.back();
    auto env = env_rank_one(fn, n);
    std::vector<GroupElement> offs;
    for (const auto& it : d.items) {
      std::vector<Int> v;
      for (const auto& c : it.coords) v.push_back(c.eval(env));
      offs.emplace_back(std::move(v));
    }
    std::vector<GroupElement> sorted = offs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t a = 1; a < sorted.size(); ++a)
      if (sorted[a] == sorted[a - 1])
        semantic(d.c_pos, {Condition::III, n + 1, false, "(" + sorted[a].str() + "," + sorted[a].str() + ")"});
    GroupSet c(d.dim, offs);
    GroupSet f;
    if (!d.has_frame || d.frame.hull) {
      Box hull = Box::point(GroupElement(d.dim));
      Box fb = *fn.bbox();
      for (const auto& x : offs) hull = bounding_box(hull, fb.translate(x));
      if (d.has_frame && !(d.frame.extra == Linear{})) {
        Int extra = d.frame.extra.eval(env);
        hull.ext[0] += extra;
        if (sgn(hull.ext[0]) <= 0)
          throw DslError(d.f_pos, "empty frame at level " + std::to_string(n + 1), true);
      }
      f = GroupSet::box(hull);
    } else {
      GroupElement lo(d.dim);
      std::vector<Int> ext;
      for (std::size_t i = 0; i < d.dim; ++i) {
        lo[i] = d.frame.box[i].first.eval(env);
        Int e = d.frame.box[i].second.eval(env) - lo[i];
        if (sgn(e) <= 0) throw DslError(d.f_pos, "empty frame at level " + std::to_string(n + 1), true);
        ext.push_back(e);
      }
      f = GroupSet::box(Box(lo, ext));
    }
    sys.C.push_back(std::move(c));
    sys.F.push_back(std::move(f));
  };
  extend(s, d.horizon);
  ValidationReport rep = validate(s);
  if (auto* bad = rep.first_failure()) semantic(bad->condition == Condition::II && d.has_frame ? d.f_pos : d.c_pos, *bad);
  return wrap(std::move(s));
}

CatalogSystem build_rank_k(const SystemDescription& d) {
  RankKSystem s;
  s.name = d.name;
  s.dim = 1;
  s.rank = d.rank;
  s.F.push_back(std::vector<GroupSet>(d.rank, GroupSet::interval(0, 1)));
  s.C.emplace_back();
  s.grow = [d](RankKSystem& sys) {
    const std::size_t n = sys.horizon();
    std::map<std::string, Int> env{{"n", Int(static_cast<unsigned long>(n))}};
    std::vector<Int> h;
    for (std::size_t i = 0; i < d.rank; ++i) {
      h.push_back(sys.F.back()[i].size());
      env["h" + std::to_string(i + 1)] = h.back();
    }
    std::vector<Edge> edges;
    for (const auto& it : d.items) {
      Edge e{*it.source - 1, GroupElement::scalar(it.coords[0].eval(env)), *it.target - 1};
      for (const auto& o : edges)
        if (o == e) {
          std::string w = "(" + std::to_string(e.source + 1) + "," + e.g.str() + "," + std::to_string(e.target + 1) + ")";
          semantic(d.c_pos, {Condition::III, n + 1, false, "(" + w + "," + w + ")"});
        }
      edges.push_back(e);
    }
    std::vector<GroupSet> frames;
    for (std::size_t j = 0; j < d.rank; ++j) {
      Int lo = 0, hi = 1;
      bool any = false;
      for (const auto& e : edges) {
        if (static_cast<std::size_t>(e.target) != j) continue;
        Int a = e.g[0], b = e.g[0] + h[e.source];
        lo = any ? std::min(lo, a) : std::min(Int(0), a);
        hi = any ? std::max(hi, b) : b;
        any = true;
      }
      const FrameSpec* spec = nullptr;
      if (d.has_frame && !d.per_tower) spec = &d.frame;
      for (const auto& tf : d.tower_frames)
        if (static_cast<std::size_t>(tf.tower) == j + 1) spec = &tf.spec;
      if (spec && !(spec->extra == Linear{})) hi += spec->extra.eval(env);
      if (hi <= lo) throw DslError(d.f_pos, "empty frame at level " + std::to_string(n + 1), true);
      frames.push_back(GroupSet::interval(lo, hi));
    }
    sys.C.push_back(std::move(edges));
    sys.F.push_back(std::move(frames));
  };
  extend(s, d.horizon);
  ValidationReport rep = validate_rank_k(s);
  if (auto* bad = rep.first_failure()) semantic(bad->condition == Condition::II && d.has_frame ? d.f_pos : d.c_pos, *bad);
  return wrap(std::move(s));
}

}  // namespace

bool structurally_equal(const SystemDescription& a, const SystemDescription& b) {
  if (a.is_catalog != b.is_catalog || a.name != b.name) return false;
  if (a.is_catalog) return a.params == b.params;
  if (a.dim != b.dim || a.rank != b.rank || a.horizon != b.horizon) return false;
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (a.items[i].source != b.items[i].source || a.items[i].target != b.items[i].target ||
        a.items[i].coords != b.items[i].coords)
      return false;
  if (a.has_frame != b.has_frame || a.per_tower != b.per_tower) return false;
  if (!a.has_frame) return true;
  if (!a.per_tower) return same_frame(a.frame, b.frame);
  if (a.tower_frames.size() != b.tower_frames.size()) return false;
  for (std::size_t i = 0; i < a.tower_frames.size(); ++i)
    if (a.tower_frames[i].tower != b.tower_frames[i].tower ||
        !same_frame(a.tower_frames[i].spec, b.tower_frames[i].spec))
      return false;
  return true;
}

SystemDescription parse_description(const std::string& text) { return Parser(text).run(); }

CatalogSystem build_system(const SystemDescription& d) {
  if (d.is_catalog) {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), d.name) == names.end())
      throw DslError(d.name_pos, "unknown catalog system '" + d.name + "'", true);
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      const auto& [key, value] = d.params[i];
      if (key == "horizon") {
        if (value < 1 || value > 200) throw DslError(d.param_pos[i], "horizon must be between 1 and 200", true);
      } else if (key == "factor" && d.name == "z2lh") {
        if (value < 1 || value > 1000000) throw DslError(d.param_pos[i], "factor must be between 1 and 1000000", true);
      } else {
        throw DslError(d.param_pos[i], "catalog '" + d.name + "' has no parameter '" + key + "'", true);
      }
    }
    return make_catalog(d.name, d.params);
  }
  return d.rank == 1 ? build_rank_one(d) : build_rank_k(d);
}

SystemDescription parse_system(const std::string& text) {
  SystemDescription d = parse_description(text);
  build_system(d);
  return d;
}

std::string print(const SystemDescription& d) {
  if (d.is_catalog) {
    std::string s = "catalog " + d.name;
    for (const auto& [k, v] : d.params) s += " " + k + "=" + v.get_str();
    return s + "\n";
  }
  std::string s = "system " + d.name + "\n";
  s += "dim = " + std::to_string(d.dim) + "\n";
  s += "rank = " + std::to_string(d.rank) + "\n";
  s += "horizon = " + std::to_string(d.horizon) + "\n";
  std::string items;
  for (const auto& it : d.items) {
    std::string one;
    if (it.source) one = std::to_string(*it.source) + " -> " + std::to_string(*it.target) + " : ";
    if (it.coords.size() == 1) {
      one += it.coords[0].str();
    } else {
      std::string t;
      for (const auto& c : it.coords) t += (t.empty() ? "" : ", ") + c.str();
      one += "(" + t + ")";
    }
    items += (items.empty() ? "" : ", ") + one;
  }
  s += "C[n+1] = {" + items + "}\n";
  if (d.has_frame) {
    if (d.per_tower) {
      std::string t;
      for (const auto& tf : d.tower_frames) t += (t.empty() ? "" : ", ") + std::to_string(tf.tower) + ": " + frame_str(tf.spec);
      s += "F[n+1] = {" + t + "}\n";
    } else {
      s += "F[n+1] = " + frame_str(d.frame) + "\n";
    }
  }
  return s;
}

}  // namespace cflab
