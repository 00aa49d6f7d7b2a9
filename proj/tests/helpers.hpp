#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// recompute expected values by routes that do not share code with the
// library implementation they check.

#include "fincat/category.hpp"
#include "fincat/kan.hpp"
#include "fincat/limits.hpp"
#include "fincat/presheaf.hpp"

namespace testutil {

using namespace fincat;

/// Walking arrow: objects a, b and one non-identity arrow a -> b.
inline CatPtr walking_arrow() {
  CategoryBuilder b;
  int oa = b.add_object("a");
  int ob = b.add_object("b");
  int ia = b.add_arrow(oa, oa, "id_a");
  int ib = b.add_arrow(ob, ob, "id_b");
  int f = b.add_arrow(oa, ob, "f");
  b.set_identity(oa, ia);
  b.set_identity(ob, ib);
  b.set_composite(ia, ia, ia);
  b.set_composite(ib, ib, ib);
  b.set_composite(f, ia, f);
  b.set_composite(ib, f, f);
  return b.build();
}

/// Parallel pair: objects a, b and arrows u, v: a -> b.
inline CatPtr parallel_pair() {
  CategoryBuilder b;
  int oa = b.add_object("a");
  int ob = b.add_object("b");
  int ia = b.add_arrow(oa, oa, "id_a");
  int ib = b.add_arrow(ob, ob, "id_b");
  b.add_arrow(oa, ob, "u");
  b.add_arrow(oa, ob, "v");
  b.set_identity(oa, ia);
  b.set_identity(ob, ib);
  return b.build();
}

/// Poset 0 < 1 as a category.
inline CatPtr chain2() { return walking_arrow(); }

/// Twisted arrow category of c, with the projection data needed to build
/// end/coend comparison diagrams. Object i is the arrow tw_arrow[i] of c.
struct TwistedArrow {
  CatPtr cat;
  std::vector<int> tw_arrow;                    // object of tw -> arrow of c
  std::vector<std::array<int, 2>> tw_morphism;  // arrow of tw -> (u, v) in c
};

inline TwistedArrow twisted_arrow(CatPtr cptr) {
  const FinCategory& c = *cptr;
  TwistedArrow t;
  CategoryBuilder b;
  for (int f = 0; f < c.arrow_count(); ++f) {
    b.add_object("[" + c.aname(f) + "]");
    t.tw_arrow.push_back(f);
  }
  // morphism f -> f': pairs (u: a' -> a, v: b -> b') with f' = v . f . u
  std::map<std::tuple<int, int, int>, int> idx;
  for (int f = 0; f < c.arrow_count(); ++f)
    for (int u = 0; u < c.arrow_count(); ++u) {
      if (c.tgt(u) != c.src(f)) continue;
      for (int v = 0; v < c.arrow_count(); ++v) {
        if (c.src(v) != c.tgt(f)) continue;
        int fp = c.compose(v, c.compose(f, u));
        int id = b.add_arrow(f, fp);
        t.tw_morphism.push_back({u, v});
        idx[{f, u, v}] = id;
      }
    }
  for (int f = 0; f < c.arrow_count(); ++f)
    b.set_identity(f, idx.at({f, c.identity[c.src(f)], c.identity[c.tgt(f)]}));
  // (u2,v2) . (u1,v1) = (u1 . u2, v2 . v1)
  for (auto& [k1, a1] : idx)
    for (auto& [k2, a2] : idx) {
      auto [f1, u1, v1] = k1;
      auto [f2, u2, v2] = k2;
      if (c.compose(v1, c.compose(f1, u1)) != f2) continue;
      b.set_composite(a2, a1, idx.at({f1, c.compose(u1, u2), c.compose(v2, v1)}));
    }
  t.cat = b.build();
  return t;
}

/// Oracle: end as the limit over the twisted arrow category of (f: a->b) -> H(a,b).
inline int end_size_by_twisted_arrow(const Bifunctor& h) {
  const FinCategory& c = *h.cat;
  TwistedArrow tw = twisted_arrow(h.cat);
  SetDiagram d;
  d.shape = tw.cat;
  d.size.resize(tw.cat->object_count);
  for (int i = 0; i < tw.cat->object_count; ++i) {
    int f = tw.tw_arrow[i];
    d.size[i] = h.size[c.src(f)][c.tgt(f)];
  }
  d.action.resize(tw.cat->arrow_count());
  for (int m = 0; m < tw.cat->arrow_count(); ++m) {
    auto [u, v] = tw.tw_morphism[m];
    int f = tw.tw_arrow[tw.cat->src(m)];
    int a = c.src(f), b = c.tgt(f);
    int ap = c.src(u);
    d.action[m].resize(h.size[a][b]);
    for (int x = 0; x < h.size[a][b]; ++x)
      d.action[m][x] = h.right[ap][v][h.left[u][b][x]];
  }
  return limit(d).size();
}

/// Oracle: coend as the colimit over the opposite twisted arrow category of
/// (f: a->b) -> H(b,a).
inline int coend_size_by_twisted_arrow(const Bifunctor& h) {
  const FinCategory& c = *h.cat;
  TwistedArrow tw = twisted_arrow(h.cat);
  CatPtr op = opposite(*tw.cat);
  SetDiagram d;
  d.shape = op;
  d.size.resize(op->object_count);
  for (int i = 0; i < op->object_count; ++i) {
    int f = tw.tw_arrow[i];
    d.size[i] = h.size[c.tgt(f)][c.src(f)];
  }
  d.action.resize(op->arrow_count());
  for (int m = 0; m < op->arrow_count(); ++m) {
    // in tw: m: f -> f' via (u, v); in tw^op it maps H(b',a') -> H(b,a)
    auto [u, v] = tw.tw_morphism[m];
    int f = tw.tw_arrow[tw.cat->src(m)];
    int fp = tw.tw_arrow[tw.cat->tgt(m)];
    int ap = c.src(fp), bp = c.tgt(fp);
    (void)ap;
    d.action[m].resize(h.size[bp][c.src(fp)]);
    for (int z = 0; z < static_cast<int>(d.action[m].size()); ++z)
      d.action[m][z] = h.right[c.tgt(f)][u][h.left[v][c.src(fp)][z]];
  }
  return colimit(d).size;
}

/// Bifunctor [P(c1), hmm] -- hom bifunctor of a category: H(a,b) = hom(a,b).
inline Bifunctor hom_bifunctor(CatPtr cptr) {
  const FinCategory& c = *cptr;
  Bifunctor h;
  h.cat = cptr;
  h.size.assign(c.object_count, std::vector<int>(c.object_count, 0));
  std::vector<std::vector<std::vector<int>>> homs(c.object_count,
                                                  std::vector<std::vector<int>>(c.object_count));
  std::vector<int> pos(c.arrow_count());
  for (int a = 0; a < c.object_count; ++a)
    for (int b2 = 0; b2 < c.object_count; ++b2) {
      homs[a][b2] = c.hom(a, b2);
      h.size[a][b2] = static_cast<int>(homs[a][b2].size());
      for (int i = 0; i < h.size[a][b2]; ++i) pos[homs[a][b2][i]] = i;
    }
  h.left.resize(c.arrow_count());
  h.right.assign(c.object_count, {});
  for (int f = 0; f < c.arrow_count(); ++f) {
    h.left[f].resize(c.object_count);
    for (int c2 = 0; c2 < c.object_count; ++c2) {
      auto& tbl = h.left[f][c2];
      tbl.resize(h.size[c.tgt(f)][c2]);
      for (int i = 0; i < static_cast<int>(tbl.size()); ++i)
        tbl[i] = pos[c.compose(homs[c.tgt(f)][c2][i], f)];
    }
  }
  for (int c1 = 0; c1 < c.object_count; ++c1) {
    h.right[c1].resize(c.arrow_count());
    for (int g = 0; g < c.arrow_count(); ++g) {
      auto& tbl = h.right[c1][g];
      tbl.resize(h.size[c1][c.src(g)]);
      for (int i = 0; i < static_cast<int>(tbl.size()); ++i)
        tbl[i] = pos[c.compose(g, homs[c1][c.src(g)][i])];
    }
  }
  return h;
}

}  // namespace testutil
