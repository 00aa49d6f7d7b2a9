#pragma once

#include <algorithm>
#include <functional>
#include <optional>

#include "fincat/category.hpp"

namespace fincat {

/// Set-valued presheaf on a finite category: a finite set per object and,
/// per arrow a: s -> t, a function P(t) -> P(s). Elements are 0..size-1.
class Presheaf {
 public:
  CatPtr cat;
  std::vector<int> size;                 // per object
  std::vector<std::vector<int>> action;  // per arrow: P(tgt) -> P(src)

  int at(int obj) const { return size[obj]; }
  int act(int arrow, int x) const { return action[arrow][x]; }

  int total_elements() const {
    int t = 0;
    for (int s : size) t += s;
    return t;
  }
};

inline LawReport check_presheaf(const Presheaf& p) {
  LawReport rep;
  const FinCategory& c = *p.cat;
  if (static_cast<int>(p.size.size()) != c.object_count ||
      static_cast<int>(p.action.size()) != c.arrow_count()) {
    rep.add("totality", "presheaf tables have wrong length");
    return rep;
  }
  for (int a = 0; a < c.arrow_count(); ++a) {
    if (static_cast<int>(p.action[a].size()) != p.size[c.tgt(a)]) {
      rep.add("totality", "action of " + c.aname(a) + " has wrong domain");
      return rep;
    }
    for (int x : p.action[a])
      if (x < 0 || x >= p.size[c.src(a)]) {
        rep.add("totality", "action of " + c.aname(a) + " lands outside P(src)");
        return rep;
      }
  }
  for (int o = 0; o < c.object_count; ++o) {
    int e = c.identity[o];
    for (int x = 0; x < p.size[o]; ++x)
      if (p.act(e, x) != x) rep.add("identity", "P(id_" + c.oname(o) + ") is not identity");
  }
  for (int g = 0; g < c.arrow_count(); ++g)
    for (int f = 0; f < c.arrow_count(); ++f) {
      if (!c.composable(g, f)) continue;
      int gf = c.compose(g, f);
      for (int x = 0; x < p.size[c.tgt(g)]; ++x)
        if (p.act(gf, x) != p.act(f, p.act(g, x))) {
          rep.add("functoriality",
                  "P(" + c.aname(g) + "." + c.aname(f) + ") != P(" + c.aname(f) +
                      ") o P(" + c.aname(g) + ")");
          break;
        }
    }
  return rep;
}

/// Representable presheaf y(c) with element i of y(c)(b) = i-th arrow of hom(b, c).
struct Representable {
  Presheaf presheaf;
  std::vector<std::vector<int>> arrows_at;  // per object: arrow ids b -> c
  std::vector<int> index_of_arrow;          // arrow id -> element index, -1 elsewhere
};

inline Representable representable(CatPtr cat, int c) {
  Representable r;
  const FinCategory& k = *cat;
  r.presheaf.cat = cat;
  r.presheaf.size.resize(k.object_count);
  r.arrows_at.resize(k.object_count);
  r.index_of_arrow.assign(k.arrow_count(), -1);
  for (int b = 0; b < k.object_count; ++b) {
    r.arrows_at[b] = k.hom(b, c);
    r.presheaf.size[b] = static_cast<int>(r.arrows_at[b].size());
    for (int i = 0; i < r.presheaf.size[b]; ++i) r.index_of_arrow[r.arrows_at[b][i]] = i;
  }
  r.presheaf.action.resize(k.arrow_count());
  for (int a = 0; a < k.arrow_count(); ++a) {
    auto& tbl = r.presheaf.action[a];
    tbl.resize(r.presheaf.size[k.tgt(a)]);
    for (int i = 0; i < static_cast<int>(tbl.size()); ++i) {
      int g = r.arrows_at[k.tgt(a)][i];
      tbl[i] = r.index_of_arrow[k.compose(g, a)];
    }
  }
  return r;
}

/// Precomposition with a functor: (restrict(f, q))(c) = q(f c).
inline Presheaf restrict_presheaf(const FinFunctor& f, const Presheaf& q) {
  require(q.cat.get() == f.target.get(), "restrict_presheaf: presheaf not on target");
  Presheaf p;
  p.cat = f.source;
  p.size.resize(f.source->object_count);
  for (int o = 0; o < f.source->object_count; ++o) p.size[o] = q.size[f.obj[o]];
  p.action.resize(f.source->arrow_count());
  for (int a = 0; a < f.source->arrow_count(); ++a) p.action[a] = q.action[f.arr[a]];
  return p;
}

/// Pointwise product of presheaves; element = x * |q(c)| + y.
inline Presheaf presheaf_product(const Presheaf& p, const Presheaf& q) {
  require(p.cat.get() == q.cat.get(), "presheaf_product: different base categories");
  Presheaf r;
  r.cat = p.cat;
  const FinCategory& c = *p.cat;
  r.size.resize(c.object_count);
  for (int o = 0; o < c.object_count; ++o) r.size[o] = p.size[o] * q.size[o];
  r.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    int s = c.src(a), t = c.tgt(a);
    r.action[a].resize(r.size[t]);
    for (int x = 0; x < p.size[t]; ++x)
      for (int y = 0; y < q.size[t]; ++y)
        r.action[a][x * q.size[t] + y] = p.act(a, x) * q.size[s] + q.act(a, y);
  }
  return r;
}

/// Pointwise disjoint sum; elements of p come first.
inline Presheaf presheaf_coproduct(const Presheaf& p, const Presheaf& q) {
  require(p.cat.get() == q.cat.get(), "presheaf_coproduct: different base categories");
  Presheaf r;
  r.cat = p.cat;
  const FinCategory& c = *p.cat;
  r.size.resize(c.object_count);
  for (int o = 0; o < c.object_count; ++o) r.size[o] = p.size[o] + q.size[o];
  r.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    int t = c.tgt(a);
    r.action[a].resize(r.size[t]);
    for (int x = 0; x < p.size[t]; ++x) r.action[a][x] = p.act(a, x);
    for (int y = 0; y < q.size[t]; ++y)
      r.action[a][p.size[t] + y] = p.size[c.src(a)] + q.act(a, y);
  }
  return r;
}

inline Presheaf empty_presheaf(CatPtr cat) {
  Presheaf p;
  p.cat = cat;
  p.size.assign(cat->object_count, 0);
  p.action.assign(cat->arrow_count(), {});
  return p;
}

/// Constant presheaf at an n-element set (all actions identity).
inline Presheaf constant_presheaf(CatPtr cat, int n) {
  Presheaf p;
  p.cat = cat;
  p.size.assign(cat->object_count, n);
  p.action.resize(cat->arrow_count());
  for (auto& tbl : p.action) {
    tbl.resize(n);
    std::iota(tbl.begin(), tbl.end(), 0);
  }
  return p;
}

/// Natural transformation, components indexed per object.
struct Nat {
  std::vector<std::vector<int>> comp;  // per object: P(c) -> Q(c)

  int operator()(int obj, int x) const { return comp[obj][x]; }
};

inline bool check_natural(const Presheaf& p, const Presheaf& q, const Nat& n,
                          std::string* why = nullptr) {
  const FinCategory& c = *p.cat;
  if (static_cast<int>(n.comp.size()) != c.object_count) {
    if (why) *why = "component count";
    return false;
  }
  for (int o = 0; o < c.object_count; ++o)
    if (static_cast<int>(n.comp[o].size()) != p.size[o]) {
      if (why) *why = "component at " + c.oname(o) + " has wrong domain";
      return false;
    }
  for (int a = 0; a < c.arrow_count(); ++a) {
    int s = c.src(a), t = c.tgt(a);
    for (int x = 0; x < p.size[t]; ++x)
      if (n.comp[s][p.act(a, x)] != q.act(a, n.comp[t][x])) {
        if (why) *why = "naturality fails at " + c.aname(a);
        return false;
      }
  }
  return true;
}

inline Nat identity_nat(const Presheaf& p) {
  Nat n;
  n.comp.resize(p.size.size());
  for (size_t o = 0; o < p.size.size(); ++o) {
    n.comp[o].resize(p.size[o]);
    std::iota(n.comp[o].begin(), n.comp[o].end(), 0);
  }
  return n;
}

inline Nat compose_nats(const Nat& g, const Nat& f) {
  Nat h;
  h.comp.resize(f.comp.size());
  for (size_t o = 0; o < f.comp.size(); ++o) {
    h.comp[o].resize(f.comp[o].size());
    for (size_t x = 0; x < f.comp[o].size(); ++x) h.comp[o][x] = g.comp[o][f.comp[o][x]];
  }
  return h;
}

inline bool nat_is_iso(const Presheaf& p, const Presheaf& q, const Nat& n) {
  for (size_t o = 0; o < p.size.size(); ++o) {
    if (p.size[o] != q.size[o]) return false;
    std::vector<char> hit(q.size[o], 0);
    for (int x = 0; x < p.size[o]; ++x) {
      if (hit[n.comp[o][x]]) return false;
      hit[n.comp[o][x]] = 1;
    }
  }
  return true;
}

inline Nat invert_nat(const Presheaf& p, const Presheaf& q, const Nat& n) {
  Nat inv;
  inv.comp.resize(q.size.size());
  for (size_t o = 0; o < q.size.size(); ++o) {
    inv.comp[o].assign(q.size[o], -1);
    for (int x = 0; x < p.size[o]; ++x) inv.comp[o][n.comp[o][x]] = x;
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Natural transformation search. Assignments are propagated along the
// functional dependencies induced by naturality: fixing alpha at (t, y)
// forces alpha at (s, P(a)(y)) for every arrow a: s -> t. Remaining choices
// are resolved by backtracking over candidate sets kept arc-consistent.

namespace detail {

struct NatSearch {
  const Presheaf& p;
  const Presheaf& q;
  const FinCategory& cat;
  std::vector<int> base;          // flat index of (obj, 0)
  int total = 0;
  // dependency edges: (from pair, to pair, arrow a) with to = (src a, P(a) y)
  struct Edge {
    int from, to, arrow;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> edges_of;  // incident edge ids per pair

  NatSearch(const Presheaf& pp, const Presheaf& qq) : p(pp), q(qq), cat(*pp.cat) {
    base.resize(cat.object_count + 1, 0);
    for (int o = 0; o < cat.object_count; ++o) base[o + 1] = base[o] + p.size[o];
    total = base[cat.object_count];
    for (int a = 0; a < cat.arrow_count(); ++a) {
      int s = cat.src(a), t = cat.tgt(a);
      if (a == cat.identity[t] && s == t) continue;
      for (int y = 0; y < p.size[t]; ++y)
        edges.push_back({base[t] + y, base[s] + p.act(a, y), a});
    }
    edges_of.resize(total);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      edges_of[edges[e].from].push_back(e);
      edges_of[edges[e].to].push_back(e);
    }
  }

  int obj_of(int pair) const {
    int o = static_cast<int>(std::upper_bound(base.begin(), base.end(), pair) -
                             base.begin()) - 1;
    return o;
  }

  using State = std::vector<std::vector<int>>;  // candidate sets per pair

  bool propagate(State& st, std::vector<int> dirty) const {
    std::vector<char> queued(total, 0);
    for (int d : dirty) queued[d] = 1;
    while (!dirty.empty()) {
      int i = dirty.back();
      dirty.pop_back();
      queued[i] = 0;
      for (int eid : edges_of[i]) {
        const Edge& e = edges[eid];
        const auto& qa = q.action[e.arrow];
        // forward: cand[to] subset of qa(cand[from]); backward: cand[from]
        // subset of qa^{-1}(cand[to])
        for (int dir = 0; dir < 2; ++dir) {
          int src = dir == 0 ? e.from : e.to;
          int dst = dir == 0 ? e.to : e.from;
          std::vector<char> allowed(q.size[obj_of(dst)], 0);
          if (dir == 0) {
            for (int z : st[src]) allowed[qa[z]] = 1;
          } else {
            std::vector<char> inTo(q.size[obj_of(src)] , 0);
            for (int w : st[src]) inTo[w] = 1;
            for (int z = 0; z < q.size[obj_of(dst)]; ++z)
              if (inTo[qa[z]]) allowed[z] = 1;
          }
          auto& cd = st[dst];
          size_t before = cd.size();
          cd.erase(std::remove_if(cd.begin(), cd.end(),
                                  [&](int z) { return !allowed[z]; }),
                   cd.end());
          if (cd.empty()) return false;
          if (cd.size() != before && !queued[dst]) {
            queued[dst] = 1;
            dirty.push_back(dst);
          }
        }
      }
    }
    return true;
  }

  /// Enumerates all naturals; visitor returns false to stop. Returns false if stopped.
  bool run(const std::function<bool(const Nat&)>& visit) const {
    State st(total);
    std::vector<int> all(total);
    for (int i = 0; i < total; ++i) {
      all[i] = i;
      st[i].resize(q.size[obj_of(i)]);
      std::iota(st[i].begin(), st[i].end(), 0);
      if (st[i].empty()) return true;  // no candidate anywhere: no naturals
    }
    State work = st;
    if (!propagate(work, all)) return true;
    return branch(work, visit);
  }

  bool branch(State& st, const std::function<bool(const Nat&)>& visit) const {
    int pick = -1;
    size_t best = 0;
    for (int i = 0; i < total; ++i)
      if (st[i].size() > 1 && (pick < 0 || st[i].size() < best)) {
        pick = i;
        best = st[i].size();
      }
    if (pick < 0) {
      Nat n;
      n.comp.resize(cat.object_count);
      for (int o = 0; o < cat.object_count; ++o) {
        n.comp[o].resize(p.size[o]);
        for (int x = 0; x < p.size[o]; ++x) n.comp[o][x] = st[base[o] + x][0];
      }
      return visit(n);
    }
    std::vector<int> options = st[pick];
    for (int z : options) {
      State next = st;
      next[pick] = {z};
      if (!propagate(next, {pick})) continue;
      if (!branch(next, visit)) return false;
    }
    return true;
  }
};

}  // namespace detail

/// Enumerates Nat(p, q); deterministic order. Visitor returns false to stop.
inline void for_each_nat(const Presheaf& p, const Presheaf& q,
                         const std::function<bool(const Nat&)>& visit) {
  detail::NatSearch s(p, q);
  s.run(visit);
}

inline long long count_nats(const Presheaf& p, const Presheaf& q) {
  long long n = 0;
  for_each_nat(p, q, [&](const Nat&) {
    ++n;
    return true;
  });
  return n;
}

inline std::vector<Nat> all_nats(const Presheaf& p, const Presheaf& q) {
  std::vector<Nat> r;
  for_each_nat(p, q, [&](const Nat& n) {
    r.push_back(n);
    return true;
  });
  return r;
}

/// Searches for a natural isomorphism; returns it if found.
inline std::optional<Nat> find_iso(const Presheaf& p, const Presheaf& q) {
  for (size_t o = 0; o < p.size.size(); ++o)
    if (p.size[o] != q.size[o]) return std::nullopt;
  std::optional<Nat> found;
  for_each_nat(p, q, [&](const Nat& n) {
    if (nat_is_iso(p, q, n)) {
      found = n;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace fincat
