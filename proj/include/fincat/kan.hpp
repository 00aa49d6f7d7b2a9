#pragma once

#include <map>

#include "fincat/limits.hpp"
#include "fincat/presheaf.hpp"

namespace fincat {

/// Set-valued bifunctor H on cat^op x cat, given by explicit tables.
/// Contravariant in the first slot, covariant in the second.
struct Bifunctor {
  CatPtr cat;
  std::vector<std::vector<int>> size;  // size[c1][c2]
  // left[f][c2]: H(tgt f, c2) -> H(src f, c2)
  std::vector<std::vector<std::vector<int>>> left;
  // right[c1][g]: H(c1, src g) -> H(c1, tgt g)
  std::vector<std::vector<std::vector<int>>> right;
};

inline LawReport check_bifunctor(const Bifunctor& h) {
  LawReport rep;
  const FinCategory& c = *h.cat;
  for (int o = 0; o < c.object_count; ++o) {
    int e = c.identity[o];
    for (int c2 = 0; c2 < c.object_count; ++c2)
      for (int x = 0; x < h.size[o][c2]; ++x)
        if (h.left[e][c2][x] != x) rep.add("identity", "left id at " + c.oname(o));
    for (int c1 = 0; c1 < c.object_count; ++c1)
      for (int x = 0; x < h.size[c1][o]; ++x)
        if (h.right[c1][e][x] != x) rep.add("identity", "right id at " + c.oname(o));
  }
  // slotwise functoriality
  for (int f2 = 0; f2 < c.arrow_count(); ++f2)
    for (int f1 = 0; f1 < c.arrow_count(); ++f1) {
      if (!c.composable(f2, f1)) continue;
      int ff = c.compose(f2, f1);
      for (int c2 = 0; c2 < c.object_count; ++c2)
        for (int x = 0; x < h.size[c.tgt(f2)][c2]; ++x)
          if (h.left[ff][c2][x] != h.left[f1][c2][h.left[f2][c2][x]])
            rep.add("functoriality", "left " + c.aname(f2) + "." + c.aname(f1));
      for (int c1 = 0; c1 < c.object_count; ++c1)
        for (int x = 0; x < h.size[c1][c.src(f1)]; ++x)
          if (h.right[c1][ff][x] != h.right[c1][f2][h.right[c1][f1][x]])
            rep.add("functoriality", "right " + c.aname(f2) + "." + c.aname(f1));
    }
  // the two actions commute
  for (int f = 0; f < c.arrow_count(); ++f)
    for (int g = 0; g < c.arrow_count(); ++g) {
      int a = c.src(f), b = c.tgt(f);
      int s = c.src(g), t = c.tgt(g);
      for (int x = 0; x < h.size[b][s]; ++x)
        if (h.right[a][g][h.left[f][s][x]] != h.left[f][t][h.right[b][g][x]]) {
          rep.add("interchange", c.aname(f) + " / " + c.aname(g));
          break;
        }
    }
  return rep;
}

/// End of a bifunctor: families (x_c in H(c,c)) with H(a,f)(x_a) = H(f,b)(x_b)
/// for every f: a -> b. Returned as explicit families in lexicographic order.
inline std::vector<std::vector<int>> end_of(const Bifunctor& h) {
  const FinCategory& c = *h.cat;
  std::vector<int> radix(c.object_count);
  for (int o = 0; o < c.object_count; ++o) radix[o] = h.size[o][o];
  std::vector<std::vector<int>> out;
  for_each_tuple(radix, [&](const std::vector<int>& t) {
    for (int f = 0; f < c.arrow_count(); ++f) {
      int a = c.src(f), b = c.tgt(f);
      if (h.right[a][f][t[a]] != h.left[f][b][t[b]]) return true;
    }
    out.push_back(t);
    return true;
  });
  return out;
}

/// Coend of a bifunctor: the sum of the diagonal values H(c,c) modulo the
/// relation generated by H(f,a)(z) ~ H(b,f)(z) for f: a -> b, z in H(b,a).
/// Classes are numbered densely in order of least flat index.
struct CoendResult {
  int size = 0;
  std::vector<std::vector<int>> injection;  // per object: H(c,c) -> coend
};

inline CoendResult coend_of(const Bifunctor& h) {
  const FinCategory& c = *h.cat;
  std::vector<int> base(c.object_count + 1, 0);
  for (int o = 0; o < c.object_count; ++o) base[o + 1] = base[o] + h.size[o][o];
  UnionFind uf(base[c.object_count]);
  for (int f = 0; f < c.arrow_count(); ++f) {
    int a = c.src(f), b = c.tgt(f);
    for (int z = 0; z < h.size[b][a]; ++z)
      uf.unite(base[a] + h.left[f][a][z], base[b] + h.right[b][f][z]);
  }
  auto [cls, count] = uf.compress();
  CoendResult r;
  r.size = count;
  r.injection.resize(c.object_count);
  for (int o = 0; o < c.object_count; ++o) {
    r.injection[o].resize(h.size[o][o]);
    for (int x = 0; x < h.size[o][o]; ++x) r.injection[o][x] = cls[base[o] + x];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Kan extensions of presheaves along a functor f: C -> D.

/// Left Kan extension, computed pointwise as the coend over C of
/// P(c) x D(d, f c). Elements at d are classes of triples (c, x, g: d -> f c);
/// the unit sends x in P(c) to the class of (c, x, id_{f c}).
struct LanResult {
  Presheaf presheaf;  // on the target category
  Nat unit;           // p -> restrict(f, presheaf)
};

inline LanResult lan(const FinFunctor& f, const Presheaf& p) {
  require(p.cat.get() == f.source.get(), "lan: presheaf not on source");
  const FinCategory& C = *f.source;
  const FinCategory& D = *f.target;

  struct Triple {
    int c, x, g;
  };
  // per target object: triples and their class
  std::vector<std::vector<Triple>> triples(D.object_count);
  std::vector<std::map<std::pair<int, std::pair<int, int>>, int>> index(D.object_count);
  std::vector<std::vector<int>> cls(D.object_count);
  Presheaf out;
  out.cat = f.target;
  out.size.assign(D.object_count, 0);

  for (int d = 0; d < D.object_count; ++d) {
    for (int c = 0; c < C.object_count; ++c) {
      for (int g : D.hom(d, f.obj[c]))
        for (int x = 0; x < p.size[c]; ++x) {
          index[d][{c, {x, g}}] = static_cast<int>(triples[d].size());
          triples[d].push_back({c, x, g});
        }
    }
    UnionFind uf(static_cast<int>(triples[d].size()));
    // relation: for u: c1 -> c2, x2 in P(c2), g: d -> f c1:
    //   (c1, P(u)(x2), g) ~ (c2, x2, f(u) . g)
    for (int u = 0; u < C.arrow_count(); ++u) {
      int c1 = C.src(u), c2 = C.tgt(u);
      for (int g : D.hom(d, f.obj[c1]))
        for (int x2 = 0; x2 < p.size[c2]; ++x2) {
          int lhs = index[d].at({c1, {p.act(u, x2), g}});
          int rhs = index[d].at({c2, {x2, D.compose(f.arr[u], g)}});
          uf.unite(lhs, rhs);
        }
    }
    auto [cc, count] = uf.compress();
    cls[d] = cc;
    out.size[d] = count;
  }

  out.action.resize(D.arrow_count());
  for (int a = 0; a < D.arrow_count(); ++a) {
    int s = D.src(a), t = D.tgt(a);
    out.action[a].assign(out.size[t], -1);
    for (size_t i = 0; i < triples[t].size(); ++i) {
      const Triple& tr = triples[t][i];
      int j = index[s].at({tr.c, {tr.x, D.compose(tr.g, a)}});
      out.action[a][cls[t][i]] = cls[s][j];
    }
  }

  LanResult r;
  r.unit.comp.resize(C.object_count);
  for (int c = 0; c < C.object_count; ++c) {
    int d = f.obj[c];
    r.unit.comp[c].resize(p.size[c]);
    for (int x = 0; x < p.size[c]; ++x)
      r.unit.comp[c][x] = cls[d][index[d].at({c, {x, D.identity[d]}})];
  }
  r.presheaf = std::move(out);
  return r;
}

/// Right Kan extension, computed pointwise as ran(f,p)(d) = Nat(restrict(f, y d), p).
/// The counit evaluates a family at the identity: restrict(f, ran) -> p.
struct RanResult {
  Presheaf presheaf;
  Nat counit;                         // restrict(f, presheaf) -> p
  std::vector<std::vector<Nat>> elements;  // per target object: the families
};

inline RanResult ran(const FinFunctor& f, const Presheaf& p) {
  require(p.cat.get() == f.source.get(), "ran: presheaf not on source");
  const FinCategory& C = *f.source;
  const FinCategory& D = *f.target;

  RanResult r;
  r.presheaf.cat = f.target;
  r.presheaf.size.assign(D.object_count, 0);
  r.elements.resize(D.object_count);
  std::vector<Representable> ys;
  ys.reserve(D.object_count);
  std::vector<Presheaf> restricted(D.object_count);
  std::vector<std::map<std::vector<std::vector<int>>, int>> index(D.object_count);
  for (int d = 0; d < D.object_count; ++d) {
    ys.push_back(representable(f.target, d));
    restricted[d] = restrict_presheaf(f, ys[d].presheaf);
    r.elements[d] = all_nats(restricted[d], p);
    r.presheaf.size[d] = static_cast<int>(r.elements[d].size());
    for (int i = 0; i < r.presheaf.size[d]; ++i) index[d][r.elements[d][i].comp] = i;
  }
  r.presheaf.action.resize(D.arrow_count());
  for (int a = 0; a < D.arrow_count(); ++a) {
    int s = D.src(a), t = D.tgt(a);
    r.presheaf.action[a].resize(r.presheaf.size[t]);
    for (int i = 0; i < r.presheaf.size[t]; ++i) {
      // precompose the family with (- . a): hom(f c, s) -> hom(f c, t)
      Nat moved;
      moved.comp.resize(C.object_count);
      for (int c = 0; c < C.object_count; ++c) {
        int n = restricted[s].size[c];
        moved.comp[c].resize(n);
        for (int e = 0; e < n; ++e) {
          int g = ys[s].arrows_at[f.obj[c]][e];  // arrow f c -> s
          int ge = ys[t].index_of_arrow[D.compose(a, g)];
          moved.comp[c][e] = r.elements[t][i].comp[c][ge];
        }
      }
      r.presheaf.action[a][i] = index[s].at(moved.comp);
    }
  }
  // counit at c: evaluate the family at id_{f c}
  r.counit.comp.resize(C.object_count);
  for (int c = 0; c < C.object_count; ++c) {
    int d = f.obj[c];
    r.counit.comp[c].resize(r.presheaf.size[d]);
    for (int i = 0; i < r.presheaf.size[d]; ++i) {
      int e = ys[d].index_of_arrow[D.identity[d]];
      r.counit.comp[c][i] = r.elements[d][i].comp[c][e];
    }
  }
  return r;
}

}  // namespace fincat
