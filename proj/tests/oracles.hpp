#pragma once

// Brute-force reference computations on plain int64 data. Nothing here calls
// into the library, so agreement is an independent check.

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Set = std::vector<long>;

inline Set norm(Set s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline Set sumset(const Set& a, const Set& b) {
  Set out;
  for (long x : a)
    for (long y : b) out.push_back(x + y);
  return norm(out);
}

inline Set diffset(const Set& a, const Set& b) {
  Set out;
  for (long x : a)
    for (long y : b) out.push_back(x - y);
  return norm(out);
}

inline bool contains(const Set& s, long x) { return std::binary_search(s.begin(), s.end(), x); }

// Rank-one system over Z with F_n = [0, h_n), F_0 = {0}.
struct Z1 {
  std::vector<long> h;  // h[0] = 1
  std::vector<Set> C;   // C[0] unused
  std::size_t depth() const { return h.size() - 1; }
};

inline Z1 odometer(std::size_t L) {
  Z1 s{{1}, {{}}};
  for (std::size_t n = 0; n < L; ++n) {
    long h = s.h.back();
    s.C.push_back({0, h});
    s.h.push_back(2 * h);
  }
  return s;
}

inline Z1 chacon(std::size_t L) {
  Z1 s{{1}, {{}}};
  for (std::size_t n = 0; n < L; ++n) {
    long h = s.h.back();
    s.C.push_back({0, h, 2 * h + 1});
    s.h.push_back(3 * h + 1);
  }
  return s;
}

inline Z1 hk(std::size_t L) {
  Z1 s{{1}, {{}}};
  for (std::size_t n = 0; n < L; ++n) {
    long h = s.h.back();
    s.C.push_back({0, 3 * h});
    s.h.push_back(4 * h);
  }
  return s;
}

inline long cprod(const Z1& s, std::size_t n) {
  long p = 1;
  for (std::size_t i = 1; i <= n; ++i) p *= static_cast<long>(s.C[i].size());
  return p;
}

// Positions at level L of the level-n cells in `cells`.
inline Set positions(const Z1& s, Set cells, std::size_t n, std::size_t L) {
  for (std::size_t i = n + 1; i <= L; ++i) cells = sumset(cells, s.C[i]);
  return cells;
}

// Counts behind mu(A cap T_g B) at depth L: exact pairs and escaping points of B.
struct Counts {
  long lo = 0, escape = 0, den = 1;
};

inline Counts correlation(const Z1& s, const Set& a, std::size_t na, const Set& b, std::size_t nb, long g,
                          std::size_t L) {
  // negative shifts are counted from the A side: mu(A cap T_g B) = mu(B cap T_-g A)
  if (g < 0) return correlation(s, b, nb, a, na, -g, L);
  Set pa = positions(s, a, na, L), pb = positions(s, b, nb, L);
  Counts c;
  c.den = cprod(s, L);
  for (long q : pb) {
    long p = q + g;
    if (p < 0 || p >= s.h[L])
      ++c.escape;
    else if (contains(pa, p))
      ++c.lo;
  }
  return c;
}

// Rank-k stacked system over Z; order[j] lists source towers bottom-up for target j.
struct ZK {
  std::size_t k = 1;
  std::vector<std::vector<long>> h;                                   // h[n][j]
  std::vector<std::vector<std::vector<std::pair<int, long>>>> place;  // place[n][j] = (source, offset)
};

inline ZK stacked(const std::vector<std::vector<int>>& order, std::size_t L) {
  ZK s;
  s.k = order.size();
  s.h.push_back(std::vector<long>(s.k, 1));
  s.place.emplace_back();
  for (std::size_t n = 0; n < L; ++n) {
    std::vector<long> next(s.k);
    std::vector<std::vector<std::pair<int, long>>> pl(s.k);
    for (std::size_t j = 0; j < s.k; ++j) {
      long pos = 0;
      for (int src : order[j]) {
        pl[j].push_back({src, pos});
        pos += s.h[n][src];
      }
      next[j] = pos;
    }
    s.h.push_back(next);
    s.place.push_back(pl);
  }
  return s;
}

// Positions in tower j at level L of the cell (tower t, position p) at level n.
inline Set positions_k(const ZK& s, int t, long p, std::size_t n, int j, std::size_t L) {
  std::vector<Set> cur(s.k);
  cur[t] = {p};
  for (std::size_t m = n + 1; m <= L; ++m) {
    std::vector<Set> nxt(s.k);
    for (std::size_t tgt = 0; tgt < s.k; ++tgt)
      for (const auto& [src, off] : s.place[m][tgt])
        for (long x : cur[src]) nxt[tgt].push_back(x + off);
    for (auto& v : nxt) v = norm(v);
    cur = nxt;
  }
  return cur[j];
}

// #{p in S : p + m in S} and #{p in S : p + m >= h}
inline std::pair<long, long> return_pairs(const Set& S, long m, long h) {
  long hit = 0, out = 0;
  for (long p : S) {
    if (p + m >= h)
      ++out;
    else if (contains(S, p + m))
      ++hit;
  }
  return {hit, out};
}

}  // namespace oracle
