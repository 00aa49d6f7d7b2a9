#pragma once

#include "fincat/category.hpp"
#include "fincat/presheaf.hpp"

namespace fincat {

/// Covariant set-valued diagram on a finite shape category.
struct SetDiagram {
  CatPtr shape;
  std::vector<int> size;                 // per object
  std::vector<std::vector<int>> action;  // per arrow a: D(src a) -> D(tgt a)
};

inline LawReport check_diagram(const SetDiagram& d) {
  LawReport rep;
  const FinCategory& c = *d.shape;
  for (int a = 0; a < c.arrow_count(); ++a)
    if (static_cast<int>(d.action[a].size()) != d.size[c.src(a)]) {
      rep.add("totality", "diagram action at " + c.aname(a) + " has wrong domain");
      return rep;
    }
  for (int o = 0; o < c.object_count; ++o)
    for (int x = 0; x < d.size[o]; ++x)
      if (d.action[c.identity[o]][x] != x) rep.add("identity", c.oname(o));
  for (int g = 0; g < c.arrow_count(); ++g)
    for (int f = 0; f < c.arrow_count(); ++f) {
      if (!c.composable(g, f)) continue;
      int gf = c.compose(g, f);
      for (int x = 0; x < d.size[c.src(f)]; ++x)
        if (d.action[gf][x] != d.action[g][d.action[f][x]])
          rep.add("functoriality", c.aname(g) + " . " + c.aname(f));
    }
  return rep;
}

/// Limit of a finite set diagram: the set of matching families, with the
/// projection cone. Element i is `elements[i]`, one value per shape object.
struct LimitResult {
  std::vector<std::vector<int>> elements;
  std::vector<std::vector<int>> projection;  // per object: limit -> D(o)

  int size() const { return static_cast<int>(elements.size()); }
};

inline LimitResult limit(const SetDiagram& d) {
  const FinCategory& c = *d.shape;
  LimitResult r;
  for_each_tuple(d.size, [&](const std::vector<int>& t) {
    for (int a = 0; a < c.arrow_count(); ++a)
      if (d.action[a][t[c.src(a)]] != t[c.tgt(a)]) return true;
    r.elements.push_back(t);
    return true;
  });
  r.projection.resize(c.object_count);
  for (int o = 0; o < c.object_count; ++o) {
    r.projection[o].resize(r.elements.size());
    for (size_t i = 0; i < r.elements.size(); ++i) r.projection[o][i] = r.elements[i][o];
  }
  return r;
}

/// Colimit of a finite set diagram: disjoint sum of the values modulo the
/// relation generated by x ~ D(a)(x). Class representatives are least flat
/// indices, renumbered densely in that order.
struct ColimitResult {
  int size = 0;
  std::vector<std::vector<int>> injection;  // per object: D(o) -> colim
};

inline ColimitResult colimit(const SetDiagram& d) {
  const FinCategory& c = *d.shape;
  std::vector<int> base(c.object_count + 1, 0);
  for (int o = 0; o < c.object_count; ++o) base[o + 1] = base[o] + d.size[o];
  UnionFind uf(base[c.object_count]);
  for (int a = 0; a < c.arrow_count(); ++a)
    for (int x = 0; x < d.size[c.src(a)]; ++x)
      uf.unite(base[c.src(a)] + x, base[c.tgt(a)] + d.action[a][x]);
  auto [cls, count] = uf.compress();
  ColimitResult r;
  r.size = count;
  r.injection.resize(c.object_count);
  for (int o = 0; o < c.object_count; ++o) {
    r.injection[o].resize(d.size[o]);
    for (int x = 0; x < d.size[o]; ++x) r.injection[o][x] = cls[base[o] + x];
  }
  return r;
}

/// Checks that (apex_size, legs) is a cone on d and that it factors uniquely
/// through the computed limit cone. Used by tests to certify universality.
inline bool cone_factors_uniquely(const SetDiagram& d, const LimitResult& lim,
                                  int apex_size, const std::vector<std::vector<int>>& legs) {
  const FinCategory& c = *d.shape;
  for (int a = 0; a < c.arrow_count(); ++a)
    for (int x = 0; x < apex_size; ++x)
      if (d.action[a][legs[c.src(a)][x]] != legs[c.tgt(a)][x]) return false;  // not a cone
  for (int x = 0; x < apex_size; ++x) {
    int hits = 0;
    for (int i = 0; i < lim.size(); ++i) {
      bool match = true;
      for (int o = 0; o < c.object_count && match; ++o)
        if (lim.projection[o][i] != legs[o][x]) match = false;
      hits += match;
    }
    if (hits != 1) return false;
  }
  return true;
}

/// Presheaf as a covariant diagram on the opposite category (arrow ids shared).
inline SetDiagram presheaf_as_diagram(const Presheaf& p, CatPtr op) {
  SetDiagram d;
  d.shape = op;
  d.size = p.size;
  d.action = p.action;
  return d;
}

}  // namespace fincat
