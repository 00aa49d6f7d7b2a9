#pragma once

#include "fincat/theory.hpp"

namespace fincat {

/// Finite symmetric monoidal category: tensor as a functor from the product
/// category, unit object, and coherence component tables (arrow ids).
struct MonoidalFinCategory {
  CatPtr base;
  CatPtr square;      // product_category(base, base)
  FinFunctor tensor;  // square -> base
  int unit = 0;
  // components: assoc[(a*|O|+b)*|O|+c]: (a@b)@c -> a@(b@c)
  std::vector<int> assoc;
  std::vector<int> lunit;  // e@a -> a
  std::vector<int> runit;  // a@e -> a
  std::vector<int> sym;    // sym[a*|O|+b]: a@b -> b@a

  int obj(int a, int b) const { return tensor.obj[a * base->object_count + b]; }
  int arr(int f, int g) const { return tensor.arr[f * base->arrow_count() + g]; }
};

/// Strict symmetric monoidal structure from object/arrow tensor tables; all
/// coherence components are identities. Tables must be strictly associative
/// and unital, which check_monoidal verifies.
inline MonoidalFinCategory strict_monoidal(CatPtr base,
                                           const std::function<int(int, int)>& obj_tensor,
                                           const std::function<int(int, int)>& arr_tensor,
                                           int unit) {
  MonoidalFinCategory m;
  m.base = base;
  m.square = product_category(*base, *base);
  m.tensor.source = m.square;
  m.tensor.target = base;
  const int O = base->object_count, A = base->arrow_count();
  m.tensor.obj.resize(O * O);
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b) m.tensor.obj[a * O + b] = obj_tensor(a, b);
  m.tensor.arr.resize(A * A);
  for (int f = 0; f < A; ++f)
    for (int g = 0; g < A; ++g) m.tensor.arr[f * A + g] = arr_tensor(f, g);
  m.unit = unit;
  m.assoc.resize(O * O * O);
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b)
      for (int c = 0; c < O; ++c)
        m.assoc[(a * O + b) * O + c] = base->identity[obj_tensor(obj_tensor(a, b), c)];
  m.lunit.resize(O);
  m.runit.resize(O);
  for (int a = 0; a < O; ++a) {
    m.lunit[a] = base->identity[a];
    m.runit[a] = base->identity[a];
  }
  m.sym.resize(O * O);
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b) m.sym[a * O + b] = base->identity[obj_tensor(a, b)];
  return m;
}

/// Exhaustive coherence check: tensor functoriality, naturality of all
/// components, pentagon, triangle, hexagon, symmetry involution.
inline LawReport check_monoidal(const MonoidalFinCategory& m) {
  LawReport rep;
  const FinCategory& c = *m.base;
  const int O = c.object_count;
  auto fr = check_functor(m.tensor);
  for (auto& v : fr.violations) rep.add("tensor-functor", v.detail);
  if (!rep.ok()) return rep;

  auto at = [&](const std::vector<int>& t, int a, int b) { return t[a * O + b]; };
  // endpoint sanity of components
  for (int a = 0; a < O; ++a) {
    if (c.src(m.lunit[a]) != m.obj(m.unit, a) || c.tgt(m.lunit[a]) != a)
      rep.add("unitor", "left unitor at " + c.oname(a));
    if (c.src(m.runit[a]) != m.obj(a, m.unit) || c.tgt(m.runit[a]) != a)
      rep.add("unitor", "right unitor at " + c.oname(a));
    for (int b = 0; b < O; ++b) {
      int s = at(m.sym, a, b);
      if (c.src(s) != m.obj(a, b) || c.tgt(s) != m.obj(b, a))
        rep.add("symmetry", "component at " + c.oname(a) + "," + c.oname(b));
    }
  }
  if (!rep.ok()) return rep;

  // naturality of symmetry: sym . (f@g) = (g@f) . sym
  for (int f = 0; f < c.arrow_count(); ++f)
    for (int g = 0; g < c.arrow_count(); ++g) {
      int lhs = c.compose(at(m.sym, c.tgt(f), c.tgt(g)), m.arr(f, g));
      int rhs = c.compose(m.arr(g, f), at(m.sym, c.src(f), c.src(g)));
      if (lhs != rhs) {
        rep.add("symmetry-naturality", c.aname(f) + " / " + c.aname(g));
        break;
      }
    }
  // naturality of unitors
  for (int f = 0; f < c.arrow_count(); ++f) {
    int e = c.identity[m.unit];
    if (c.compose(m.lunit[c.tgt(f)], m.arr(e, f)) != c.compose(f, m.lunit[c.src(f)]))
      rep.add("unitor-naturality", "left at " + c.aname(f));
    if (c.compose(m.runit[c.tgt(f)], m.arr(f, e)) != c.compose(f, m.runit[c.src(f)]))
      rep.add("unitor-naturality", "right at " + c.aname(f));
  }
  // naturality of the associator
  for (int f = 0; f < c.arrow_count(); ++f)
    for (int g = 0; g < c.arrow_count(); ++g)
      for (int h = 0; h < c.arrow_count(); ++h) {
        int a = c.src(f), b = c.src(g), d = c.src(h);
        int a2 = c.tgt(f), b2 = c.tgt(g), d2 = c.tgt(h);
        int lhs = c.compose(m.assoc[(a2 * O + b2) * O + d2], m.arr(m.arr(f, g), h));
        int rhs = c.compose(m.arr(f, m.arr(g, h)), m.assoc[(a * O + b) * O + d]);
        if (lhs != rhs) {
          rep.add("associator-naturality",
                  c.aname(f) + "/" + c.aname(g) + "/" + c.aname(h));
          goto assoc_done;
        }
      }
assoc_done:
  // triangle: (id_a @ lunit_b) . assoc_{a,e,b} = runit_a @ id_b
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b) {
      int lhs = c.compose(m.arr(c.identity[a], m.lunit[b]),
                          m.assoc[(a * O + m.unit) * O + b]);
      int rhs = m.arr(m.runit[a], c.identity[b]);
      if (lhs != rhs) rep.add("triangle", c.oname(a) + "," + c.oname(b));
    }
  // pentagon
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b)
      for (int d = 0; d < O; ++d)
        for (int e2 = 0; e2 < O; ++e2) {
          int ab = m.obj(a, b), de = m.obj(d, e2);
          int lhs = c.compose(m.assoc[(a * O + b) * O + de],
                              m.assoc[(ab * O + d) * O + e2]);
          int rhs = c.compose(
              m.arr(c.identity[a], m.assoc[(b * O + d) * O + e2]),
              c.compose(m.assoc[(a * O + m.obj(b, d)) * O + e2],
                        m.arr(m.assoc[(a * O + b) * O + d], c.identity[e2])));
          if (lhs != rhs) {
            rep.add("pentagon", c.oname(a) + "," + c.oname(b) + "," + c.oname(d) + "," +
                                    c.oname(e2));
            goto pentagon_done;
          }
        }
pentagon_done:
  // hexagon (one of the two; the other follows with symmetry involution)
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b)
      for (int d = 0; d < O; ++d) {
        int lhs = c.compose(
            m.arr(c.identity[b], at(m.sym, a, d)),
            c.compose(m.assoc[(b * O + a) * O + d],
                      m.arr(at(m.sym, a, b), c.identity[d])));
        int rhs = c.compose(m.assoc[(b * O + d) * O + a],
                            c.compose(at(m.sym, a, m.obj(b, d)),
                                      m.assoc[(a * O + b) * O + d]));
        if (lhs != rhs) {
          rep.add("hexagon", c.oname(a) + "," + c.oname(b) + "," + c.oname(d));
          goto hexagon_done;
        }
      }
hexagon_done:
  // symmetry involution
  for (int a = 0; a < O; ++a)
    for (int b = 0; b < O; ++b)
      if (c.compose(at(m.sym, b, a), at(m.sym, a, b)) != c.identity[m.obj(a, b)])
        rep.add("symmetry-involution", c.oname(a) + "," + c.oname(b));
  return rep;
}

// ---------------------------------------------------------------------------
// Day convolution over a (possibly partial) tensor. The partial case arises
// from truncation: object tensors beyond the arity bound do not exist, and
// the coend ranges over the defined pairs.

/// Partial tensor data: obj/arr return -1 when undefined.
struct TensorView {
  CatPtr cat;
  std::function<int(int, int)> obj;
  std::function<int(int, int)> arr;
  int unit = 0;
};

inline TensorView view_of(const MonoidalFinCategory& m) {
  TensorView v;
  v.cat = m.base;
  v.obj = [&m](int a, int b) { return m.obj(a, b); };
  v.arr = [&m](int f, int g) { return m.arr(f, g); };
  v.unit = m.unit;
  return v;
}

/// Day tensor (P @ Q)(C) = coend over (C1, C2) of P(C1) x Q(C2) x hom(C, C1@C2),
/// with classes exposed so canonical maps out of the coend can be built.
struct DayResult {
  Presheaf presheaf;
  struct Quad {
    int c1, c2, x, y, g;
  };
  std::vector<std::vector<Quad>> elems;  // per object: the quadruples
  std::vector<std::vector<int>> cls;     // per object: quadruple -> class

  int class_of(int obj, int c1, int c2, int x, int y, int g) const {
    for (size_t i = 0; i < elems[obj].size(); ++i) {
      const Quad& q = elems[obj][i];
      if (q.c1 == c1 && q.c2 == c2 && q.x == x && q.y == y && q.g == g)
        return cls[obj][i];
    }
    throw input_error("day: no such coend element");
  }
};

inline DayResult day_tensor(const Presheaf& p, const Presheaf& q, const TensorView& v) {
  const FinCategory& c = *v.cat;
  require(p.cat.get() == v.cat.get() && q.cat.get() == v.cat.get(),
          "day_tensor: presheaves not on the tensor category");
  DayResult r;
  r.presheaf.cat = p.cat;
  r.presheaf.size.assign(c.object_count, 0);
  r.elems.resize(c.object_count);
  r.cls.resize(c.object_count);

  std::vector<std::map<std::tuple<int, int, int, int, int>, int>> index(c.object_count);
  for (int C = 0; C < c.object_count; ++C) {
    for (int c1 = 0; c1 < c.object_count; ++c1)
      for (int c2 = 0; c2 < c.object_count; ++c2) {
        int t = v.obj(c1, c2);
        if (t < 0) continue;
        for (int g : c.hom(C, t))
          for (int x = 0; x < p.size[c1]; ++x)
            for (int y = 0; y < q.size[c2]; ++y) {
              index[C][{c1, c2, x, y, g}] = static_cast<int>(r.elems[C].size());
              r.elems[C].push_back({c1, c2, x, y, g});
            }
      }
    UnionFind uf(static_cast<int>(r.elems[C].size()));
    // one-sided moves generate the full relation: for u: d1 -> c1,
    //   (d1, c2, P(u)x, y, g) ~ (c1, c2, x, y, (u @ id_c2) . g)
    for (int u = 0; u < c.arrow_count(); ++u) {
      int d1 = c.src(u), c1 = c.tgt(u);
      for (int c2 = 0; c2 < c.object_count; ++c2) {
        int td = v.obj(d1, c2), tc = v.obj(c1, c2);
        if (td < 0 || tc < 0) continue;
        int uten = v.arr(u, c.identity[c2]);
        for (int g : c.hom(C, td))
          for (int x = 0; x < p.size[c1]; ++x)
            for (int y = 0; y < q.size[c2]; ++y)
              uf.unite(index[C].at({d1, c2, p.act(u, x), y, g}),
                       index[C].at({c1, c2, x, y, c.compose(uten, g)}));
      }
    }
    for (int u = 0; u < c.arrow_count(); ++u) {
      int d2 = c.src(u), c2 = c.tgt(u);
      for (int c1 = 0; c1 < c.object_count; ++c1) {
        int td = v.obj(c1, d2), tc = v.obj(c1, c2);
        if (td < 0 || tc < 0) continue;
        int uten = v.arr(c.identity[c1], u);
        for (int g : c.hom(C, td))
          for (int x = 0; x < p.size[c1]; ++x)
            for (int y = 0; y < q.size[c2]; ++y)
              uf.unite(index[C].at({c1, d2, x, q.act(u, y), g}),
                       index[C].at({c1, c2, x, y, c.compose(uten, g)}));
      }
    }
    auto [cc, count] = uf.compress();
    r.cls[C] = cc;
    r.presheaf.size[C] = count;
  }
  r.presheaf.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    int s = c.src(a), t = c.tgt(a);
    r.presheaf.action[a].assign(r.presheaf.size[t], -1);
    for (size_t i = 0; i < r.elems[t].size(); ++i) {
      const auto& e = r.elems[t][i];
      int j = index[s].at({e.c1, e.c2, e.x, e.y, c.compose(e.g, a)});
      r.presheaf.action[a][r.cls[t][i]] = r.cls[s][j];
    }
  }
  return r;
}

/// Day internal hom [P,Q](C) = end over C' of maps(P(C'), Q(C' @ C)),
/// realized as Nat(P, Q(- @ C)). For a partial tensor the end ranges over
/// the defined pairs; actions that leave the defined range are forced
/// through point evaluations, which requires Q to be a model there (callers
/// with total tensors never hit that path).
struct DayHomResult {
  Presheaf presheaf;
  std::vector<std::vector<Nat>> elements;  // per object: families over defined C'
  std::vector<std::vector<char>> defined;  // per object: which C' are in range
};

inline DayHomResult day_hom(const Presheaf& p, const Presheaf& q, const TensorView& v,
                            const TheoryPresentation* force_theory = nullptr) {
  const FinCategory& c = *v.cat;
  DayHomResult r;
  r.presheaf.cat = p.cat;
  r.presheaf.size.assign(c.object_count, 0);
  r.elements.resize(c.object_count);
  r.defined.assign(c.object_count, std::vector<char>(c.object_count, 0));
  std::vector<std::map<std::vector<std::vector<int>>, int>> index(c.object_count);

  for (int C = 0; C < c.object_count; ++C)
    for (int c1 = 0; c1 < c.object_count; ++c1) r.defined[C][c1] = v.obj(c1, C) >= 0;

  if (!force_theory) {
    // total tensor: the end at C is Nat(p, q(- @ C)) computed directly
    for (int C = 0; C < c.object_count; ++C) {
      Presheaf sh;
      sh.cat = p.cat;
      sh.size.resize(c.object_count);
      sh.action.resize(c.arrow_count());
      for (int c1 = 0; c1 < c.object_count; ++c1) sh.size[c1] = q.size[v.obj(c1, C)];
      for (int a = 0; a < c.arrow_count(); ++a) {
        int at = v.arr(a, c.identity[C]);
        require(at >= 0, "day_hom: arrow tensor undefined");
        sh.action[a] = q.action[at];
      }
      r.elements[C] = all_nats(p, sh);
      r.presheaf.size[C] = static_cast<int>(r.elements[C].size());
      for (int i = 0; i < r.presheaf.size[C]; ++i) index[C][r.elements[C][i].comp] = i;
    }
    r.presheaf.action.resize(c.arrow_count());
    for (int a = 0; a < c.arrow_count(); ++a) {
      int Cs = c.src(a), Ct = c.tgt(a);
      r.presheaf.action[a].resize(r.presheaf.size[Ct]);
      for (int i = 0; i < r.presheaf.size[Ct]; ++i) {
        const Nat& phi = r.elements[Ct][i];
        Nat psi;
        psi.comp.resize(c.object_count);
        for (int c1 = 0; c1 < c.object_count; ++c1) {
          int moved = v.arr(c.identity[c1], a);  // c1 @ Cs -> c1 @ Ct
          require(moved >= 0, "day_hom: action tensor undefined");
          psi.comp[c1].resize(p.size[c1]);
          for (int x = 0; x < p.size[c1]; ++x)
            psi.comp[c1][x] = q.act(moved, phi.comp[c1][x]);
        }
        auto it = index[Cs].find(psi.comp);
        require(it != index[Cs].end(), "day_hom: moved family is not in the end");
        r.presheaf.action[a][i] = it->second;
      }
    }
    return r;
  }

  // Partial tensor: q must be a model. A family at C is determined by its
  // component at object 1, which must intertwine every operation of the
  // theory against the induced operations on q(C); components at the other
  // defined objects are reconstructed through point evaluations.
  const TheoryPresentation& th = *force_theory;
  const int N = th.bound();
  FiniteAlgebra q_alg = algebra_of_model(q, th);
  // per object W: evaluation table of q(W) under its point arrows
  std::vector<std::vector<std::vector<int>>> ev(N + 1);
  std::vector<std::map<std::vector<int>, int>> evidx(N + 1);
  for (int W = 0; W <= N; ++W) {
    ev[W].resize(q.size[W]);
    for (int z = 0; z < q.size[W]; ++z) {
      std::vector<int> e(W);
      for (int j = 0; j < W; ++j) e[j] = q.act(th.point_arrow(W, j), z);
      ev[W][z] = e;
      evidx[W][e] = z;
    }
  }
  // operation constraints on the object-1 component: for theta: 1 -> k and
  // x in P(k), the value at P(theta)(x) is the induced operation applied to
  // the values at the point restrictions of x
  struct OpConstraint {
    int theta, k, out_slot;
    std::vector<int> arg_slots;
  };
  std::vector<OpConstraint> cons;
  for (int k = 0; k <= N; ++k)
    for (int theta : c.hom(1, k))
      for (int x = 0; x < p.size[k]; ++x) {
        OpConstraint oc;
        oc.theta = theta;
        oc.k = k;
        oc.out_slot = p.act(theta, x);
        oc.arg_slots.resize(k);
        for (int j = 0; j < k; ++j) oc.arg_slots[j] = p.act(th.point_arrow(k, j), x);
        cons.push_back(std::move(oc));
      }

  for (int C = 0; C <= N; ++C) {
    // induced operation on q(C): coordinatewise carrier operation
    auto op_on_qc = [&](int theta, const std::vector<int>& args) {
      std::vector<int> out(C);
      std::vector<int> carrier_args(args.size());
      for (int cc = 0; cc < C; ++cc) {
        for (size_t j = 0; j < args.size(); ++j) carrier_args[j] = ev[C][args[j]][cc];
        out[cc] = q_alg.apply(theta, carrier_args);
      }
      auto it = evidx[C].find(out);
      require(it != evidx[C].end(), "day_hom: induced operation left the model");
      return it->second;
    };
    // enumerate op-compatible components at object 1 by forcing
    std::vector<std::vector<int>> phis;
    std::vector<int> slot(p.size[1], -1);
    std::function<bool(std::vector<int>&)> close = [&](std::vector<int>& s) {
      bool progress = true;
      while (progress) {
        progress = false;
        for (const auto& oc : cons) {
          std::vector<int> args(oc.k);
          bool ready = true;
          for (int j = 0; j < oc.k && ready; ++j) {
            if (s[oc.arg_slots[j]] < 0) ready = false;
            else args[j] = s[oc.arg_slots[j]];
          }
          if (!ready) continue;
          int want = op_on_qc(oc.theta, args);
          if (s[oc.out_slot] < 0) {
            s[oc.out_slot] = want;
            progress = true;
          } else if (s[oc.out_slot] != want) {
            return false;
          }
        }
      }
      return true;
    };
    std::function<void(std::vector<int>)> rec = [&](std::vector<int> s) {
      if (!close(s)) return;
      int next = -1;
      for (int i = 0; i < p.size[1]; ++i)
        if (s[i] < 0) {
          next = i;
          break;
        }
      if (next < 0) {
        phis.push_back(s);
        return;
      }
      for (int val = 0; val < q.size[C]; ++val) {
        auto trial = s;
        trial[next] = val;
        rec(std::move(trial));
      }
    };
    rec(slot);

    // expand each component to a family over the defined range and verify
    // naturality there
    for (auto& phi1 : phis) {
      Nat fam;
      fam.comp.assign(c.object_count, {});
      bool ok = true;
      for (int c1 = 0; c1 <= N && ok; ++c1) {
        if (!r.defined[C][c1]) continue;
        int W = v.obj(c1, C);
        fam.comp[c1].resize(p.size[c1]);
        for (int x = 0; x < p.size[c1] && ok; ++x) {
          std::vector<int> coords(c1);
          for (int j = 0; j < c1; ++j) coords[j] = phi1[p.act(th.point_arrow(c1, j), x)];
          // the component value is the element of q(W) whose point
          // evaluations match the coordinates, under the pairing
          // pt_{j*C+cc} = (pt_j @ id_C) . pt_cc
          std::vector<int> evw(W);
          for (int j = 0; j < c1; ++j)
            for (int cc = 0; cc < C; ++cc) evw[j * C + cc] = ev[C][coords[j]][cc];
          auto it = evidx[W].find(evw);
          if (it == evidx[W].end()) {
            ok = false;
            break;
          }
          fam.comp[c1][x] = it->second;
        }
      }
      if (!ok) continue;
      // naturality over the defined subcategory
      bool natural = true;
      for (int a = 0; a < c.arrow_count() && natural; ++a) {
        int s = c.src(a), t = c.tgt(a);
        if (!r.defined[C][s] || !r.defined[C][t]) continue;
        int at = v.arr(a, c.identity[C]);
        for (int x = 0; x < p.size[t] && natural; ++x)
          if (fam.comp[s][p.act(a, x)] != q.act(at, fam.comp[t][x])) natural = false;
      }
      if (!natural) continue;
      r.elements[C].push_back(std::move(fam));
    }
    r.presheaf.size[C] = static_cast<int>(r.elements[C].size());
    for (int i = 0; i < r.presheaf.size[C]; ++i) index[C][r.elements[C][i].comp] = i;
  }

  // actions: move the object-1 component along a: Cs -> Ct by q(1 @ a) and
  // look up the resulting family
  r.presheaf.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    int Cs = c.src(a), Ct = c.tgt(a);
    int moved1 = v.arr(c.identity[1], a);  // 1 @ Cs -> 1 @ Ct, always defined
    require(moved1 >= 0, "day_hom: unit action undefined");
    r.presheaf.action[a].resize(r.presheaf.size[Ct]);
    for (int i = 0; i < r.presheaf.size[Ct]; ++i) {
      // the object-1 component determines the family; move it and look up
      const Nat& phi = r.elements[Ct][i];
      std::vector<int> phi1(p.size[1]);
      for (int x = 0; x < p.size[1]; ++x) phi1[x] = q.act(moved1, phi.comp[1][x]);
      int found = -1;
      for (int j2 = 0; j2 < r.presheaf.size[Cs] && found < 0; ++j2)
        if (r.elements[Cs][j2].comp[1] == phi1) found = j2;
      require(found >= 0, "day_hom: moved family is not in the end");
      r.presheaf.action[a][i] = found;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Commutative theories: the theory category carries a partial tensor with
// object tensor = product of arities (defined up to the truncation bound)
// and tau strict monoidal.

struct CommutativeTheory {
  TheoryPresentation theory;
  std::vector<std::vector<int>> obj_tensor;        // -1 when m*n exceeds the bound
  std::map<std::pair<int, int>, int> arrow_tensor;  // defined arrow pairs

  TensorView view() const {
    TensorView v;
    v.cat = theory.theory;
    v.unit = 1;
    v.obj = [this](int a, int b) { return obj_tensor[a][b]; };
    v.arr = [this](int f, int g) {
      auto it = arrow_tensor.find({f, g});
      return it == arrow_tensor.end() ? -1 : it->second;
    };
    return v;
  }
};

/// Builds the commutative structure of a family theory from its elementwise
/// tensor. Arrow tensors are defined whenever both endpoint products stay
/// within the bound.
inline CommutativeTheory commutative_theory(std::shared_ptr<const TruncatedFinSetSite> base,
                                            const TheoryFamily& fam) {
  require(static_cast<bool>(fam.tensor_elem), "commutative_theory: family has no tensor");
  CommutativeTheory ct;
  ct.theory = build_theory(std::move(base), fam);
  const FinCategory& T = *ct.theory.theory;
  const int N = ct.theory.bound();
  ct.obj_tensor.assign(T.object_count, std::vector<int>(T.object_count, -1));
  for (int a = 0; a <= N; ++a)
    for (int b = 0; b <= N; ++b)
      if (a * b <= N) ct.obj_tensor[a][b] = a * b;
  for (int f = 0; f < T.arrow_count(); ++f)
    for (int g = 0; g < T.arrow_count(); ++g) {
      int m = T.src(f), n = T.tgt(f), mp = T.src(g), np = T.tgt(g);
      if (m * mp > N || n * np > N) continue;
      const auto& ft = ct.theory.arrow_tuple[f];
      const auto& gt = ct.theory.arrow_tuple[g];
      std::vector<int> out(m * mp);
      for (int j = 0; j < m; ++j)
        for (int jp = 0; jp < mp; ++jp)
          out[j * mp + jp] = fam.tensor_elem(n, np, ft[j], gt[jp]);
      ct.arrow_tensor[{f, g}] = ct.theory.arrow_index.at({m * mp, n * np, out});
    }
  return ct;
}

/// Site arrow of the product function f x g under the pairing
/// (i, j) -> i * m' + j.
inline int site_product_arrow(const TruncatedFinSetSite& s, int f, int g) {
  const auto& ft = s.finset.table_of(f);
  const auto& gt = s.finset.table_of(g);
  const FinCategory& c = *s.site.cat;
  int m = c.src(f), n = c.tgt(f), mp = c.src(g), np = c.tgt(g);
  std::vector<int> out(m * mp);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < mp; ++j) out[i * mp + j] = ft[i] * np + gt[j];
  return s.finset.arrow_of(m * mp, n * np, out);
}

/// Coherence of a commutative theory: tau strict monoidal on the defined
/// range, tensor functorial with strict units and symmetric via the image of
/// the site swap, and every T @ - sending sum cocones to coproduct cocones
/// (with the canonical point cocone of I @ T a coproduct, naturally in T).
inline LawReport tensor_sketchy(const CommutativeTheory& ct) {
  LawReport rep;
  const TheoryPresentation& t = ct.theory;
  const FinCategory& T = *t.theory;
  const FinCategory& C = *t.site().cat;
  const int N = t.bound();
  auto ten = [&](int f, int g) {
    auto it = ct.arrow_tensor.find({f, g});
    return it == ct.arrow_tensor.end() ? -1 : it->second;
  };

  // tau strict monoidal on objects and arrows
  for (int f = 0; f < C.arrow_count(); ++f)
    for (int g = 0; g < C.arrow_count(); ++g) {
      if (C.src(f) * C.src(g) > N || C.tgt(f) * C.tgt(g) > N) continue;
      int lhs = ten(t.tau.arr[f], t.tau.arr[g]);
      int rhs = t.tau.arr[site_product_arrow(*t.base, f, g)];
      if (lhs != rhs) {
        rep.add("tau-strictness", C.aname(f) + " x " + C.aname(g));
        return rep;
      }
    }
  // interchange: (f2.f1) @ (g2.g1) = (f2@g2).(f1@g1) where defined
  for (int f2 = 0; f2 < T.arrow_count(); ++f2)
    for (int f1 = 0; f1 < T.arrow_count(); ++f1) {
      if (!T.composable(f2, f1)) continue;
      for (int g2 = 0; g2 < T.arrow_count(); ++g2)
        for (int g1 = 0; g1 < T.arrow_count(); ++g1) {
          if (!T.composable(g2, g1)) continue;
          int a = ten(f2, g2), b = ten(f1, g1);
          int c = ten(T.compose(f2, f1), T.compose(g2, g1));
          if (a < 0 || b < 0) continue;
          if (c != T.compose(a, b)) {
            rep.add("interchange", T.aname(f1) + "," + T.aname(g1));
            return rep;
          }
        }
    }
  // identities and strict unit
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n)
      if (m * n <= N && ten(T.identity[m], T.identity[n]) != T.identity[m * n])
        rep.add("identity-tensor", std::to_string(m) + "," + std::to_string(n));
  for (int f = 0; f < T.arrow_count(); ++f) {
    if (ten(f, T.identity[1]) != f) rep.add("unit", "right at " + T.aname(f));
    if (ten(T.identity[1], f) != f) rep.add("unit", "left at " + T.aname(f));
  }
  if (!rep.ok()) return rep;
  // symmetry via the image of the site swap
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      if (m * n > N) continue;
      std::vector<int> swap_tbl(m * n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) swap_tbl[i * n + j] = j * m + i;
      int sigma = t.tau.arr[t.base->finset.arrow_of(m * n, n * m, swap_tbl)];
      for (int f = 0; f < T.arrow_count(); ++f) {
        if (T.src(f) != m) continue;
        for (int g = 0; g < T.arrow_count(); ++g) {
          if (T.src(g) != n) continue;
          int fg = ten(f, g), gf = ten(g, f);
          if (fg < 0 || gf < 0) continue;
          int np2 = T.tgt(f) * T.tgt(g);
          std::vector<int> swap2(np2);
          int tf = T.tgt(f), tg = T.tgt(g);
          for (int i = 0; i < tf; ++i)
            for (int j = 0; j < tg; ++j) swap2[i * tg + j] = j * tf + i;
          int sigma2 = t.tau.arr[t.base->finset.arrow_of(np2, np2, swap2)];
          if (T.compose(sigma2, fg) != T.compose(gf, sigma)) {
            rep.add("symmetry", T.aname(f) + " / " + T.aname(g));
            return rep;
          }
        }
      }
    }

  // point cocones: for I @ T defined, {tau(pt_i) @ id_T} exhibits I @ T as the
  // I-fold coproduct of T, naturally in T
  for (int I = 0; I <= N; ++I)
    for (int To = 0; To <= N; ++To) {
      if (I * To > N) continue;
      std::vector<int> legs(I);
      bool ok = true;
      for (int i = 0; i < I && ok; ++i) {
        legs[i] = ten(t.point_arrow(I, i), T.identity[To]);
        if (legs[i] < 0) ok = false;
      }
      if (!ok) continue;
      for (int S = 0; S < T.object_count; ++S) {
        std::map<std::vector<int>, int> seen;
        long long expected = 1;
        for (int i = 0; i < I; ++i) expected *= T.hom(To, S).size();
        if (expected > 1 << 22) continue;
        for (int g : T.hom(I * To, S)) {
          std::vector<int> key(I);
          for (int i = 0; i < I; ++i) key[i] = T.compose(g, legs[i]);
          if (!seen.emplace(key, g).second) {
            rep.add("point-cocone", "not jointly monic at I=" + std::to_string(I) +
                                        " T=" + std::to_string(To));
            return rep;
          }
        }
        if (static_cast<long long>(T.hom(I * To, S).size()) != expected) {
          rep.add("point-cocone", "hom count at I=" + std::to_string(I) +
                                      " T=" + std::to_string(To) + " S=" + T.oname(S));
          return rep;
        }
      }
      // naturality in T
      for (int u = 0; u < T.arrow_count(); ++u) {
        if (T.src(u) != To || I * T.tgt(u) > N) continue;
        int moved = ten(T.identity[I], u);
        if (moved < 0) continue;
        for (int i = 0; i < I; ++i) {
          int leg2 = ten(t.point_arrow(I, i), T.identity[T.tgt(u)]);
          if (T.compose(moved, legs[i]) != T.compose(leg2, u)) {
            rep.add("point-cocone-naturality", "I=" + std::to_string(I) + " u=" + T.aname(u));
            return rep;
          }
        }
      }
    }

  // covers tensored with T stay coproduct cocones
  for (const auto& cov : t.site().covers)
    for (int To = 0; To <= N; ++To) {
      if (cov.apex * To > N) continue;
      bool in_range = true;
      for (int f : cov.arrows)
        if (C.src(f) * To > N) in_range = false;
      if (!in_range) continue;
      for (int S = 0; S < T.object_count; ++S) {
        std::map<std::vector<int>, int> seen;
        long long expected = 1;
        for (int f : cov.arrows) expected *= T.hom(C.src(f) * To, S).size();
        if (expected > 1 << 22) continue;
        for (int g : T.hom(cov.apex * To, S)) {
          std::vector<int> key;
          for (int f : cov.arrows)
            key.push_back(T.compose(g, ten(t.tau.arr[f], T.identity[To])));
          if (!seen.emplace(key, g).second) {
            rep.add("cover-tensor", "cover at apex " + C.oname(cov.apex) +
                                        " tensored with " + std::to_string(To));
            return rep;
          }
        }
        if (static_cast<long long>(T.hom(cov.apex * To, S).size()) != expected) {
          rep.add("cover-tensor", "count at apex " + C.oname(cov.apex) + " with T=" +
                                      std::to_string(To));
          return rep;
        }
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Tensor and internal hom of models over a commutative theory.

enum class TensorRoute { day, congruence, both };

struct ModelTensorResult {
  bool converged = false;
  FiniteAlgebra algebra;         // the tensor as a finite algebra
  std::optional<Presheaf> model; // materialized when the presheaf stays small
  // the bihom unit on carriers: (a, b) -> element of the tensor carrier
  std::vector<std::vector<int>> pair_unit;
  // carrier isomorphism congruence -> day when both routes ran and agree
  std::optional<std::vector<int>> route_iso;
};

namespace detail {

/// Greedy generating subset of an algebra: add elements until the closure
/// under all operations is everything.
inline std::vector<int> generating_set(const FiniteAlgebra& a) {
  std::vector<char> reached(a.carrier, 0);
  std::vector<int> gens;
  auto close = [&]() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& [arrow, tbl] : a.op) {
        int n = a.theory->theory->tgt(arrow);
        std::vector<int> radix(n, a.carrier);
        for_each_tuple(radix, [&](const std::vector<int>& x) {
          for (int j = 0; j < n; ++j)
            if (!reached[x[j]]) return true;
          int out = tbl[tuple_rank(x, radix)];
          if (!reached[out]) {
            reached[out] = 1;
            progress = true;
          }
          return true;
        });
      }
    }
  };
  close();  // constants
  for (int x = 0; x < a.carrier; ++x)
    if (!reached[x]) {
      gens.push_back(x);
      reached[x] = 1;
      close();
    }
  return gens;
}

/// Derivation terms: for each element, how to build it from the generators.
struct Derivations {
  // per element: (-1, gen_index) when a generator/constant seed, otherwise
  // (op arrow, argument elements)
  std::vector<std::pair<int, std::vector<int>>> step;
};

inline Derivations derive_all(const FiniteAlgebra& a, const std::vector<int>& gens) {
  Derivations d;
  d.step.assign(a.carrier, {-2, {}});
  for (size_t i = 0; i < gens.size(); ++i) d.step[gens[i]] = {-1, {static_cast<int>(i)}};
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto& [arrow, tbl] : a.op) {
      int n = a.theory->theory->tgt(arrow);
      std::vector<int> radix(n, a.carrier);
      for_each_tuple(radix, [&](const std::vector<int>& x) {
        for (int j = 0; j < n; ++j)
          if (d.step[x[j]].first == -2) return true;
        int out = tbl[tuple_rank(x, radix)];
        if (d.step[out].first == -2) {
          d.step[out] = {arrow, x};
          progress = true;
        }
        return true;
      });
    }
  }
  for (auto& s : d.step)
    require(s.first != -2, "derive_all: generators do not generate");
  return d;
}

/// Evaluates the derivation of `elem` in another algebra, with the given
/// images for the generators.
inline int eval_derivation(const FiniteAlgebra& a, const Derivations& d,
                           const FiniteAlgebra& target, const std::vector<int>& gen_img,
                           int elem, std::map<int, int>& memo) {
  auto it = memo.find(elem);
  if (it != memo.end()) return it->second;
  const auto& [arrow, args] = d.step[elem];
  int out;
  if (arrow == -1) {
    out = gen_img[args[0]];
  } else {
    std::vector<int> img(args.size());
    for (size_t j = 0; j < args.size(); ++j)
      img[j] = eval_derivation(a, d, target, gen_img, args[j], memo);
    out = target.apply(arrow, img);
  }
  memo[elem] = out;
  return out;
}

}  // namespace detail

/// Tensor product of models. Route day reflects the Day convolution of the
/// underlying presheaves; route congruence presents the tensor by generators
/// and relations on a free model over the generator grid. With route both,
/// the canonical comparison between the two is returned as a witnessed
/// isomorphism.
inline ModelTensorResult model_tensor(const Presheaf& m1, const Presheaf& m2,
                                      const CommutativeTheory& ct, int bound = 8,
                                      TensorRoute route = TensorRoute::both) {
  const TheoryPresentation& t = ct.theory;
  ModelTensorResult day_out, cong_out;

  if (route != TensorRoute::congruence) {
    auto d = day_tensor(m1, m2, ct.view());
    auto refl = modelify(d.presheaf, t, bound);
    day_out.converged = refl.converged;
    if (refl.converged) {
      day_out.algebra = algebra_of_model(refl.model, t);
      day_out.model = refl.model;
      int id1 = t.theory->identity[1];
      day_out.pair_unit.assign(m1.size[1], std::vector<int>(m2.size[1]));
      for (int a = 0; a < m1.size[1]; ++a)
        for (int b = 0; b < m2.size[1]; ++b)
          day_out.pair_unit[a][b] =
              refl.unit.comp[1][d.class_of(1, 1, 1, a, b, id1)];
    }
    if (route == TensorRoute::day) return day_out;
    if (!day_out.converged && route == TensorRoute::both) return day_out;
  }

  {
    FiniteAlgebra a1 = algebra_of_model(m1, t);
    FiniteAlgebra a2 = algebra_of_model(m2, t);
    auto g1 = detail::generating_set(a1);
    auto g2 = detail::generating_set(a2);
    auto d1 = detail::derive_all(a1, g1);
    auto d2 = detail::derive_all(a2, g2);
    int n1 = static_cast<int>(g1.size()), n2 = static_cast<int>(g2.size());
    FiniteAlgebra free_alg = free_algebra(t, n1 * n2);
    // grid point (i, j) enters as the generator i*n2 + j
    std::vector<std::vector<int>> grid_unit(n1, std::vector<int>(n2));
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        grid_unit[i][j] = t.family->generator(n1 * n2, i * n2 + j);
    // phi(a, j): evaluate the derivation of a with leaves g1[i] -> grid(i, j)
    auto phi = [&](int elem, int j, std::map<int, int>& memo) {
      std::vector<int> img(n1);
      for (int i = 0; i < n1; ++i) img[i] = grid_unit[i][j];
      return detail::eval_derivation(a1, d1, free_alg, img, elem, memo);
    };
    auto psi = [&](int i, int elem, std::map<int, int>& memo) {
      std::vector<int> img(n2);
      for (int j = 0; j < n2; ++j) img[j] = grid_unit[i][j];
      return detail::eval_derivation(a2, d2, free_alg, img, elem, memo);
    };
    std::vector<std::map<int, int>> memo_phi(n2), memo_psi(n1);
    std::vector<std::pair<int, int>> pairs;
    for (auto& [arrow, tbl] : a1.op) {
      int n = t.theory->tgt(arrow);
      std::vector<int> radix(n, a1.carrier);
      for_each_tuple(radix, [&](const std::vector<int>& x) {
        for (int j = 0; j < n2; ++j) {
          std::vector<int> imgs(n);
          for (int k = 0; k < n; ++k) imgs[k] = phi(x[k], j, memo_phi[j]);
          int lhs = phi(a1.apply(arrow, x), j, memo_phi[j]);
          int rhs = free_alg.apply(arrow, imgs);
          if (lhs != rhs) pairs.push_back({lhs, rhs});
        }
        return true;
      });
    }
    for (auto& [arrow, tbl] : a2.op) {
      int n = t.theory->tgt(arrow);
      std::vector<int> radix(n, a2.carrier);
      for_each_tuple(radix, [&](const std::vector<int>& x) {
        for (int i = 0; i < n1; ++i) {
          std::vector<int> imgs(n);
          for (int k = 0; k < n; ++k) imgs[k] = psi(i, x[k], memo_psi[i]);
          int lhs = psi(i, a2.apply(arrow, x), memo_psi[i]);
          int rhs = free_alg.apply(arrow, imgs);
          if (lhs != rhs) pairs.push_back({lhs, rhs});
        }
        return true;
      });
    }
    auto quot = congruence_quotient(free_alg, pairs);
    cong_out.converged = true;
    cong_out.algebra = quot.algebra;
    // materialize the presheaf only when it stays small
    long long est = 0;
    for (int a = 0; a < t.theory->arrow_count(); ++a) {
      long long s = 1;
      for (int i = 0; i < t.theory->tgt(a); ++i) s *= quot.algebra.carrier;
      est += s;
      if (est > (1 << 23)) break;
    }
    if (est <= (1 << 23)) cong_out.model = model_of_algebra(quot.algebra);
    // bihom on full carriers: evaluate the derivation of a against psi-images
    cong_out.pair_unit.assign(a1.carrier, std::vector<int>(a2.carrier));
    for (int b = 0; b < a2.carrier; ++b) {
      std::vector<int> img(n1);
      for (int i = 0; i < n1; ++i) img[i] = psi(i, b, memo_psi[i]);
      std::map<int, int> memo;
      for (int a = 0; a < a1.carrier; ++a)
        cong_out.pair_unit[a][b] =
            quot.projection[detail::eval_derivation(a1, d1, free_alg, img, a, memo)];
    }
    if (route == TensorRoute::congruence) return cong_out;
  }

  // both: canonical comparison forced from the pure tensors
  ModelTensorResult r = day_out;
  r.converged = day_out.converged && cong_out.converged;
  if (r.converged) {
    std::vector<std::pair<int, int>> gen;
    for (size_t a = 0; a < day_out.pair_unit.size(); ++a)
      for (size_t b = 0; b < day_out.pair_unit[a].size(); ++b)
        gen.push_back({cong_out.pair_unit[a][b], day_out.pair_unit[a][b]});
    auto h = force_hom(cong_out.algebra, day_out.algebra, gen);
    if (h && cong_out.algebra.carrier == day_out.algebra.carrier) {
      std::vector<char> hit(day_out.algebra.carrier, 0);
      bool bij = true;
      for (int v : *h) {
        if (hit[v]) bij = false;
        hit[v] = 1;
      }
      if (bij) r.route_iso = *h;
    }
  }
  return r;
}

/// Internal hom of models: the Day hom of the underlying presheaves, which
/// must already be a model (no reflection applied).
inline Presheaf model_hom(const Presheaf& m1, const Presheaf& m2,
                          const CommutativeTheory& ct) {
  auto h = day_hom(m1, m2, ct.view(), &ct.theory);
  require(model_of(h.presheaf, ct.theory), "model_hom: day hom is not a model");
  return h.presheaf;
}

}  // namespace fincat
