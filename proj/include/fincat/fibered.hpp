#pragma once

#include "fincat/day.hpp"
#include "fincat/theory.hpp"

namespace fincat {

// ---------------------------------------------------------------------------
// Explicit fibered presentations: a finite total category with a projection
// and chosen (op)cartesian lifts, validated by enumerating the universal
// property. Lift tables may be partial at truncation; only stored lifts are
// checked and used.

struct FiberedPresentation {
  CatPtr total;
  FinFunctor projection;  // total -> base
  // (base arrow, total object over its target) -> chosen cartesian lift
  std::map<std::pair<int, int>, int> cart;
  // (base arrow, total object over its source) -> chosen opcartesian lift
  std::map<std::pair<int, int>, int> opcart;
};

inline LawReport check_fibered_presentation(const FiberedPresentation& fp) {
  LawReport rep;
  auto fr = check_functor(fp.projection);
  for (auto& v : fr.violations) rep.add("projection", v.detail);
  if (!rep.ok()) return rep;
  const FinCategory& T = *fp.total;
  const FinCategory& B = *fp.projection.target;

  for (auto& [key, lift] : fp.cart) {
    auto [phi, e] = key;
    if (fp.projection.arr[lift] != phi || T.tgt(lift) != e) {
      rep.add("cartesian", "lift of " + B.aname(phi) + " at " + T.oname(e) +
                               " has wrong endpoints");
      continue;
    }
    int src = T.src(lift);
    // universal property: every g: e'' -> e over phi . psi factors uniquely
    // through the lift by an arrow over psi
    for (int g = 0; g < T.arrow_count(); ++g) {
      if (T.tgt(g) != e) continue;
      for (int psi = 0; psi < B.arrow_count(); ++psi) {
        if (!B.composable(phi, psi)) continue;
        if (fp.projection.arr[g] != B.compose(phi, psi)) continue;
        int count = 0;
        for (int h = 0; h < T.arrow_count(); ++h) {
          if (T.src(h) != T.src(g) || T.tgt(h) != src) continue;
          if (fp.projection.arr[h] != psi) continue;
          if (T.compose(lift, h) == g) ++count;
        }
        if (count != 1) {
          rep.add("cartesian", "lift of " + B.aname(phi) + " at " + T.oname(e) +
                                   ": factorization count " + std::to_string(count));
          return rep;
        }
      }
    }
  }
  for (auto& [key, lift] : fp.opcart) {
    auto [phi, e] = key;
    if (fp.projection.arr[lift] != phi || T.src(lift) != e) {
      rep.add("opcartesian", "lift of " + B.aname(phi) + " at " + T.oname(e) +
                                 " has wrong endpoints");
      continue;
    }
    int dst = T.tgt(lift);
    for (int g = 0; g < T.arrow_count(); ++g) {
      if (T.src(g) != e) continue;
      for (int psi = 0; psi < B.arrow_count(); ++psi) {
        if (!B.composable(psi, phi)) continue;
        if (fp.projection.arr[g] != B.compose(psi, phi)) continue;
        int count = 0;
        for (int h = 0; h < T.arrow_count(); ++h) {
          if (T.src(h) != dst || T.tgt(h) != T.tgt(g)) continue;
          if (fp.projection.arr[h] != psi) continue;
          if (T.compose(h, lift) == g) ++count;
        }
        if (count != 1) {
          rep.add("opcartesian", "lift of " + B.aname(phi) + " at " + T.oname(e) +
                                     ": factorization count " + std::to_string(count));
          return rep;
        }
      }
    }
  }
  return rep;
}

/// Materializes the family fibration of a theory on a small window: total
/// objects are pairs (I <= max_base, tuple over theory objects <= max_entry),
/// arrows are pairs (site arrow, componentwise theory arrows). Cartesian
/// lifts reindex; opcartesian lifts sum fibers and are stored where the sums
/// stay within the window.
inline FiberedPresentation family_fibration_fragment(const TheoryPresentation& t,
                                                     int max_base, int max_entry) {
  const FinCategory& C = *t.site().cat;
  const FinCategory& T = *t.theory;
  FiberedPresentation fp;

  std::map<std::pair<int, std::vector<int>>, int> obj_index;
  std::vector<std::pair<int, std::vector<int>>> objs;
  CategoryBuilder b;
  for (int I = 0; I <= max_base; ++I) {
    std::vector<int> radix(I, max_entry + 1);
    for_each_tuple(radix, [&](const std::vector<int>& A) {
      obj_index[{I, A}] = b.add_object();
      objs.push_back({I, A});
      return true;
    });
  }
  // arrows: (phi: I -> I2, components u_i: A_i -> A2_{phi(i)})
  struct ArrowData {
    int phi;
    std::vector<int> comp;
  };
  std::vector<ArrowData> arrows;
  std::map<std::tuple<int, int, int, std::vector<int>>, int> arr_index;
  std::vector<int> proj_arr;
  for (size_t so = 0; so < objs.size(); ++so)
    for (size_t to = 0; to < objs.size(); ++to) {
      auto& [I, A] = objs[so];
      auto& [I2, A2] = objs[to];
      for (int phi = 0; phi < C.arrow_count(); ++phi) {
        if (C.src(phi) != I || C.tgt(phi) != I2) continue;
        const auto& table = t.base->finset.table_of(phi);
        std::vector<int> radix(I);
        std::vector<std::vector<int>> homs(I);
        bool possible = true;
        for (int i = 0; i < I; ++i) {
          homs[i] = T.hom(A[i], A2[table[i]]);
          radix[i] = static_cast<int>(homs[i].size());
          if (radix[i] == 0) possible = false;
        }
        if (!possible) continue;
        for_each_tuple(radix, [&](const std::vector<int>& pick) {
          std::vector<int> comp(I);
          for (int i = 0; i < I; ++i) comp[i] = homs[i][pick[i]];
          int id = b.add_arrow(static_cast<int>(so), static_cast<int>(to));
          arrows.push_back({phi, comp});
          arr_index[{static_cast<int>(so), static_cast<int>(to), phi, comp}] = id;
          proj_arr.push_back(phi);
          return true;
        });
      }
    }
  // identities and composition
  for (size_t o = 0; o < objs.size(); ++o) {
    auto& [I, A] = objs[o];
    std::vector<int> comp(I);
    for (int i = 0; i < I; ++i) comp[i] = T.identity[A[i]];
    b.set_identity(static_cast<int>(o),
                   arr_index.at({static_cast<int>(o), static_cast<int>(o),
                                 C.identity[I], comp}));
  }
  // composition: componentwise after reindexing
  // g: (I2,A2) -> (I3,A3) over psi after f: (I,A) -> (I2,A2) over phi
  // has components g_{table_phi(i)} . f_i over psi . phi
  {
    // need source/target object of every arrow: recover by scanning blocks
    std::vector<int> src_of(arrows.size()), tgt_of(arrows.size());
    for (auto& [k, id] : arr_index) {
      src_of[id] = std::get<0>(k);
      tgt_of[id] = std::get<1>(k);
    }
    for (size_t g = 0; g < arrows.size(); ++g)
      for (size_t f = 0; f < arrows.size(); ++f) {
        if (src_of[g] != tgt_of[f]) continue;
        auto& [I, A] = objs[src_of[f]];
        const auto& table_phi = t.base->finset.table_of(arrows[f].phi);
        std::vector<int> comp(I);
        for (int i = 0; i < I; ++i)
          comp[i] = T.compose(arrows[g].comp[table_phi[i]], arrows[f].comp[i]);
        int psi_phi = C.compose(arrows[g].phi, arrows[f].phi);
        b.set_composite(static_cast<int>(g), static_cast<int>(f),
                        arr_index.at({src_of[f], tgt_of[g], psi_phi, comp}));
      }
  }
  fp.total = b.build();
  fp.projection.source = fp.total;
  fp.projection.target = t.site().cat;
  fp.projection.obj.resize(objs.size());
  for (size_t o = 0; o < objs.size(); ++o) fp.projection.obj[o] = objs[o].first;
  fp.projection.arr = proj_arr;

  // cartesian lifts: reindex along phi; opcartesian: fiber sums when small
  std::vector<int> src_of(arrows.size()), tgt_of(arrows.size());
  for (auto& [k, id] : arr_index) {
    src_of[id] = std::get<0>(k);
    tgt_of[id] = std::get<1>(k);
  }
  for (int phi = 0; phi < C.arrow_count(); ++phi) {
    int I = C.src(phi), I2 = C.tgt(phi);
    if (I > max_base || I2 > max_base) continue;
    const auto& table = t.base->finset.table_of(phi);
    for (size_t o = 0; o < objs.size(); ++o) {
      auto& [J2, A2] = objs[o];
      if (J2 == I2) {
        // cartesian lift at A2 over I2: source (I, A2 . table)
        std::vector<int> pulled(I);
        std::vector<int> comp(I);
        for (int i = 0; i < I; ++i) {
          pulled[i] = A2[table[i]];
          comp[i] = T.identity[pulled[i]];
        }
        auto it = obj_index.find({I, pulled});
        if (it != obj_index.end())
          fp.cart[{phi, static_cast<int>(o)}] =
              arr_index.at({it->second, static_cast<int>(o), phi, comp});
      }
      auto& [J1, A1] = objs[o];
      if (J1 == I) {
        // opcartesian lift at A1 over I: target has fiber sums
        std::vector<int> sums(I2, 0);
        bool ok = true;
        for (int i = 0; i < I && ok; ++i) {
          sums[table[i]] += A1[i];
          if (sums[table[i]] > max_entry || sums[table[i]] > t.bound()) ok = false;
        }
        for (int j = 0; j < I2; ++j)
          if (sums[j] > max_entry || sums[j] > t.bound()) ok = false;
        if (!ok) continue;
        auto it = obj_index.find({I2, sums});
        if (it == obj_index.end()) continue;
        // components: block injections into the sums, ordered by source point
        std::vector<int> offset(I2, 0);
        std::vector<int> comp(I);
        for (int i = 0; i < I; ++i) {
          int j = table[i];
          // site block injection A1[i] -> sums[j] at the current offset
          std::vector<int> inj(A1[i]);
          for (int k = 0; k < A1[i]; ++k) inj[k] = offset[j] + k;
          offset[j] += A1[i];
          comp[i] = t.tau.arr[t.base->finset.arrow_of(A1[i], sums[j], inj)];
        }
        fp.opcart[{phi, static_cast<int>(o)}] =
            arr_index.at({static_cast<int>(o), it->second, phi, comp});
      }
    }
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Family power categories: the fiber of the theory over a base set J is the
// category of J-indexed families with componentwise arrows.

struct FamilyCategory {
  CatPtr cat;
  CatPtr slot;
  int power = 0;
  std::vector<std::vector<int>> obj_tuples;
  std::map<std::vector<int>, int> obj_index;
  std::vector<std::vector<int>> arr_tuples;  // componentwise slot arrows
  std::map<std::tuple<int, int, std::vector<int>>, int> arr_index;

  int obj_of(const std::vector<int>& t) const { return obj_index.at(t); }
  int arr_of(int src, int tgt, const std::vector<int>& comps) const {
    return arr_index.at({src, tgt, comps});
  }
};

inline FamilyCategory power_category(CatPtr slot, int power) {
  FamilyCategory fc;
  fc.slot = slot;
  fc.power = power;
  const FinCategory& S = *slot;
  CategoryBuilder b;
  std::vector<int> oradix(power, S.object_count);
  for_each_tuple(oradix, [&](const std::vector<int>& t) {
    fc.obj_index[t] = b.add_object();
    fc.obj_tuples.push_back(t);
    return true;
  });
  for (size_t so = 0; so < fc.obj_tuples.size(); ++so)
    for (size_t to = 0; to < fc.obj_tuples.size(); ++to) {
      std::vector<std::vector<int>> homs(power);
      std::vector<int> radix(power);
      bool possible = true;
      for (int j = 0; j < power; ++j) {
        homs[j] = S.hom(fc.obj_tuples[so][j], fc.obj_tuples[to][j]);
        radix[j] = static_cast<int>(homs[j].size());
        if (!radix[j]) possible = false;
      }
      if (!possible) continue;
      for_each_tuple(radix, [&](const std::vector<int>& pick) {
        std::vector<int> comp(power);
        for (int j = 0; j < power; ++j) comp[j] = homs[j][pick[j]];
        int id = b.add_arrow(static_cast<int>(so), static_cast<int>(to));
        fc.arr_tuples.push_back(comp);
        fc.arr_index[{static_cast<int>(so), static_cast<int>(to), comp}] = id;
        return true;
      });
    }
  std::vector<std::pair<int, int>> ends(fc.arr_tuples.size());
  for (auto& [k, id] : fc.arr_index) ends[id] = {std::get<0>(k), std::get<1>(k)};
  for (size_t o = 0; o < fc.obj_tuples.size(); ++o) {
    std::vector<int> comp(power);
    for (int j = 0; j < power; ++j) comp[j] = S.identity[fc.obj_tuples[o][j]];
    b.set_identity(static_cast<int>(o),
                   fc.arr_index.at({static_cast<int>(o), static_cast<int>(o), comp}));
  }
  for (size_t g = 0; g < fc.arr_tuples.size(); ++g)
    for (size_t f = 0; f < fc.arr_tuples.size(); ++f) {
      if (ends[f].second != ends[g].first) continue;
      std::vector<int> comp(power);
      for (int j = 0; j < power; ++j)
        comp[j] = S.compose(fc.arr_tuples[g][j], fc.arr_tuples[f][j]);
      b.set_composite(static_cast<int>(g), static_cast<int>(f),
                      fc.arr_index.at({ends[f].first, ends[g].second, comp}));
    }
  fc.cat = b.build();
  return fc;
}

/// The fiber site over a base set of size J: families of site objects with
/// the binary family-sum covers and the empty cover of the zero family.
struct FiberSite {
  FamilyCategory families;
  FiniteSite site;
  const TruncatedFinSetSite* trunc = nullptr;
};

inline FiberSite fiber_site(const TruncatedFinSetSite& s, int power) {
  FiberSite r;
  r.trunc = &s;
  r.families = power_category(s.site.cat, power);
  r.site.cat = r.families.cat;
  const int N = s.bound();
  // empty cover of the zero family
  std::vector<int> zero(power, 0);
  r.site.covers.push_back({r.families.obj_of(zero), {}});
  // binary family splits A = B + C, componentwise block injections
  for (size_t o = 0; o < r.families.obj_tuples.size(); ++o) {
    const auto& A = r.families.obj_tuples[o];
    std::vector<int> radix(power);
    for (int j = 0; j < power; ++j) radix[j] = A[j] + 1;
    for_each_tuple(radix, [&](const std::vector<int>& B) {
      bool trivialB = true, trivialC = true;
      std::vector<int> C(power);
      for (int j = 0; j < power; ++j) {
        C[j] = A[j] - B[j];
        if (B[j] != A[j]) trivialB = false;
        if (C[j] != A[j]) trivialC = false;
      }
      if (trivialB || trivialC) return true;
      // arrows: componentwise first/second block injections
      std::vector<int> comps1(power), comps2(power);
      for (int j = 0; j < power; ++j) {
        std::vector<int> i1(B[j]), i2(C[j]);
        for (int k = 0; k < B[j]; ++k) i1[k] = k;
        for (int k = 0; k < C[j]; ++k) i2[k] = B[j] + k;
        comps1[j] = s.finset.arrow_of(B[j], A[j], i1);
        comps2[j] = s.finset.arrow_of(C[j], A[j], i2);
      }
      int ob = r.families.obj_of(B), oc = r.families.obj_of(C);
      r.site.covers.push_back(
          {static_cast<int>(o),
           {r.families.arr_of(ob, static_cast<int>(o), comps1),
            r.families.arr_of(oc, static_cast<int>(o), comps2)}});
      return true;
    });
  }
  (void)N;
  return r;
}

/// Componentwise tau: the fiber of the theory functor over the base set.
inline FinFunctor fiber_tau(const TheoryPresentation& t, const FamilyCategory& site_fams,
                            const FamilyCategory& theory_fams) {
  FinFunctor f;
  f.source = site_fams.cat;
  f.target = theory_fams.cat;
  f.obj.resize(site_fams.obj_tuples.size());
  for (size_t o = 0; o < site_fams.obj_tuples.size(); ++o)
    f.obj[o] = theory_fams.obj_of(site_fams.obj_tuples[o]);
  f.arr.resize(site_fams.arr_tuples.size());
  for (auto& [k, id] : site_fams.arr_index) {
    auto& [so, to, comps] = k;
    std::vector<int> mapped(comps.size());
    for (size_t j = 0; j < comps.size(); ++j) mapped[j] = t.tau.arr[comps[j]];
    f.arr[id] = theory_fams.arr_of(f.obj[so], f.obj[to], mapped);
  }
  return f;
}

// ---------------------------------------------------------------------------
// The Lawvere side: a cartesian multiplicative functor over a base object J,
// stored as one span-graded sheaf per family object (I, A) together with
// fiber actions and the chosen cartesian comparisons to single-slot objects.

struct PairedSheaf {
  Presheaf sheaf;  // on the site
  // grade[X][element] = (a: X -> I, b: X -> J) site arrow ids
  std::vector<std::vector<std::pair<int, int>>> grade;
};

struct LawvereFunctor {
  int J = 0;  // base set size
  const TheoryPresentation* theory = nullptr;
  // family objects (I, A) with I a site object and A a tuple of theory objects
  std::vector<std::pair<int, std::vector<int>>> objs;
  std::map<std::pair<int, std::vector<int>>, int> obj_index;
  std::vector<PairedSheaf> at;  // per family object
  // fiber action: per base I, per fiber family arrow (A -> A2 componentwise):
  // natural map at[(I,A2)] -> at[(I,A)] over the identity grades
  // keyed by (I, theory-arrow components)
  std::map<std::pair<int, std::vector<int>>, Nat> fiber_action;
  // chosen cartesian comparison: sections of at[(I,A)] graded by a constant
  // a-leg at i0 correspond to sections of at[(1,(A_i0))]; stored per
  // (family object, i0) as a per-object-per-element partial map
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> point_restriction;

  int fam(int I, const std::vector<int>& A) const { return obj_index.at({I, A}); }
};

/// Enumerates the family objects of a theory (bases and tuples bounded by
/// the truncation).
inline void enumerate_family_objects(const TheoryPresentation& t, LawvereFunctor& m) {
  const int N = t.bound();
  for (int I = 0; I <= N; ++I) {
    std::vector<int> radix(I, N + 1);
    for_each_tuple(radix, [&](const std::vector<int>& A) {
      m.obj_index[{I, A}] = static_cast<int>(m.objs.size());
      m.objs.push_back({I, A});
      return true;
    });
  }
}

/// Validates a Lawvere functor: sheaf and grade naturality per family
/// object, grade-preserving natural fiber actions, and multiplicativity
/// (the point decomposition of every span is a bijection). Failures carry
/// the offending family object and span.
inline LawReport check_lawvere(const LawvereFunctor& m) {
  LawReport rep;
  const TheoryPresentation& t = *m.theory;
  const FinCategory& C = *t.site().cat;
  const FinCategory& T = *t.theory;
  const int J = m.J;

  for (size_t F = 0; F < m.objs.size(); ++F) {
    auto& [I, A] = m.objs[F];
    const PairedSheaf& ps = m.at[F];
    auto pr = check_presheaf(ps.sheaf);
    if (!pr.ok()) {
      rep.add("sheaf", "family object (" + std::to_string(I) + ",...) is not functorial");
      return rep;
    }
    if (!is_sheaf(ps.sheaf, t.site()).is_sheaf) {
      rep.add("sheaf", "family object (" + std::to_string(I) + ",...) is not a sheaf");
      return rep;
    }
    for (int h = 0; h < C.arrow_count(); ++h) {
      int X = C.tgt(h), X2 = C.src(h);
      for (int s = 0; s < ps.sheaf.size[X]; ++s) {
        auto [a, b] = ps.grade[X][s];
        auto [a2, b2] = ps.grade[X2][ps.sheaf.act(h, s)];
        if (a2 != C.compose(a, h) || b2 != C.compose(b, h)) {
          rep.add("grade", "grade is not natural at family object " + std::to_string(F));
          return rep;
        }
        (void)X2;
      }
    }
  }

  // fiber actions: endpoints, naturality, grade preservation
  for (auto& [key, nat] : m.fiber_action) {
    auto& [I, comps] = key;
    std::vector<int> Asrc(comps.size()), Atgt(comps.size());
    for (size_t i = 0; i < comps.size(); ++i) {
      Asrc[i] = T.src(comps[i]);
      Atgt[i] = T.tgt(comps[i]);
    }
    int Fs = m.obj_index.at({I, Asrc});
    int Ft = m.obj_index.at({I, Atgt});
    if (!check_natural(m.at[Ft].sheaf, m.at[Fs].sheaf, nat)) {
      rep.add("fiber-action", "not natural at base " + std::to_string(I));
      return rep;
    }
    for (int X = 0; X < C.object_count; ++X)
      for (int s = 0; s < m.at[Ft].sheaf.size[X]; ++s)
        if (m.at[Ft].grade[X][s] != m.at[Fs].grade[X][nat.comp[X][s]]) {
          rep.add("fiber-action", "grade not preserved at base " + std::to_string(I));
          return rep;
        }
  }

  // point restrictions: defined exactly on constant-graded sections, with
  // the right target grade, naturally in the site
  for (auto& [key, table] : m.point_restriction) {
    auto [F, i0] = key;
    auto& [I, A] = m.objs[F];
    int Fpt = m.obj_index.at({1, {A[i0]}});
    for (int X = 0; X < C.object_count; ++X) {
      int const_a = t.base->finset.arrow_of(X, I, std::vector<int>(X, i0));
      int bang = t.base->finset.arrow_of(X, 1, std::vector<int>(X, 0));
      for (int e = 0; e < m.at[F].sheaf.size[X]; ++e) {
        auto [a, b] = m.at[F].grade[X][e];
        if (a != const_a) {
          if (table[X][e] >= 0) {
            rep.add("cartesian-comparison",
                    "restriction defined off the constant grade at family object " +
                        std::to_string(F));
            return rep;
          }
          continue;
        }
        if (table[X][e] < 0 ||
            m.at[Fpt].grade[X][table[X][e]] != std::make_pair(bang, b)) {
          rep.add("cartesian-comparison", "restriction grade mismatch at family object " +
                                              std::to_string(F) + ", point " +
                                              std::to_string(i0));
          return rep;
        }
      }
      for (int h = 0; h < C.arrow_count(); ++h) {
        if (C.tgt(h) != X) continue;
        int X2 = C.src(h);
        for (int e = 0; e < m.at[F].sheaf.size[X]; ++e) {
          if (table[X][e] < 0) continue;
          if (table[X2][m.at[F].sheaf.act(h, e)] !=
              m.at[Fpt].sheaf.act(h, table[X][e])) {
            rep.add("cartesian-comparison",
                    "restriction not natural at family object " + std::to_string(F));
            return rep;
          }
        }
      }
    }
  }

  // multiplicativity: per family object and span, sections biject with
  // tuples of point sections
  for (size_t F = 0; F < m.objs.size(); ++F) {
    auto& [I, A] = m.objs[F];
    for (int X = 0; X < C.object_count; ++X) {
      // group sections by grade
      std::map<std::pair<int, int>, std::vector<int>> by_grade;
      for (int s = 0; s < m.at[F].sheaf.size[X]; ++s)
        by_grade[m.at[F].grade[X][s]].push_back(s);
      for (int a : C.hom(X, I))
        for (int b : C.hom(X, J)) {
          const auto& at = t.base->finset.table_of(a);
          const auto& bt = t.base->finset.table_of(b);
          long long expected = 1;
          std::map<std::vector<int>, int> seen;
          for (int x = 0; x < X; ++x) {
            // point sections of the single-slot object at (a(x), b(x))
            int Fpt = m.obj_index.at({1, {A[at[x]]}});
            int count = 0;
            for (int s1 = 0; s1 < m.at[Fpt].sheaf.size[1]; ++s1)
              if (m.at[Fpt].grade[1][s1] ==
                  std::make_pair(C.identity[1],
                                 t.base->finset.arrow_of(1, J, {bt[x]})))
                ++count;
            expected *= count;
          }
          auto sections = by_grade.find({a, b});
          long long have = sections == by_grade.end() ? 0 : sections->second.size();
          // decomposition must be injective as well
          if (sections != by_grade.end()) {
            for (int s : sections->second) {
              std::vector<int> key;
              for (int x = 0; x < X; ++x) {
                int pt = t.base->finset.arrow_of(1, X, {x});
                int sx = m.at[F].sheaf.act(pt, s);
                auto it = m.point_restriction.find({static_cast<int>(F), at[x]});
                if (it == m.point_restriction.end() || it->second[1][sx] < 0) {
                  rep.add("cartesian-comparison",
                          "missing point restriction at family object " +
                              std::to_string(F));
                  return rep;
                }
                key.push_back(it->second[1][sx]);
              }
              if (!seen.emplace(key, s).second) {
                rep.add("multiplicativity", "span (" + C.aname(a) + ", " + C.aname(b) +
                                                ") at family object " + std::to_string(F) +
                                                " is not jointly monic");
                return rep;
              }
            }
          }
          if (have != expected) {
            rep.add("multiplicativity",
                    "span (" + C.aname(a) + ", " + C.aname(b) + ") at family object " +
                        std::to_string(F) + ": " + std::to_string(have) +
                        " sections, expected " + std::to_string(expected));
            return rep;
          }
        }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// beta: Linton model -> Lawvere functor. The sheaf of a family object is the
// product extension of the point values barM(delta_j(A_i)); the formula
// value at a compound span agrees with these products whenever the family
// extension exists, which the tests check against the direct formula.

struct LintonSetting {
  const TheoryPresentation* t = nullptr;
  int J = 1;                  // base set size; must be a site object
  FamilyCategory theory_fams; // families over J in the theory
  FiberSite site_fams;        // families over J in the site, with covers
  FinFunctor tau_J;           // componentwise tau
};

inline LintonSetting linton_setting(const TheoryPresentation& t, int J) {
  require(J <= t.bound(), "linton_setting: base set exceeds the site bound");
  LintonSetting s;
  s.t = &t;
  s.J = J;
  s.theory_fams = power_category(t.theory, J);
  s.site_fams = fiber_site(*t.base, J);
  s.tau_J = fiber_tau(t, s.site_fams.families, s.theory_fams);
  return s;
}

/// The Linton model condition over the fiber: restriction along the
/// componentwise tau is a sheaf for the family covers.
inline bool is_linton_model(const Presheaf& barM, const LintonSetting& s) {
  return is_sheaf(restrict_presheaf(s.tau_J, barM), s.site_fams.site).is_sheaf;
}

/// delta_j(t): the family with t at slot j and 0 elsewhere.
inline int delta_obj(const LintonSetting& s, int t_obj, int j) {
  std::vector<int> tup(s.J, 0);
  tup[j] = t_obj;
  return s.theory_fams.obj_of(tup);
}

/// delta_j(u) for a theory arrow u, identity of 0 elsewhere.
inline int delta_arr(const LintonSetting& s, int u, int j) {
  const FinCategory& T = *s.t->theory;
  std::vector<int> comps(s.J, T.identity[0]);
  comps[j] = u;
  std::vector<int> st(s.J, 0), tt(s.J, 0);
  st[j] = T.src(u);
  tt[j] = T.tgt(u);
  return s.theory_fams.arr_of(s.theory_fams.obj_of(st), s.theory_fams.obj_of(tt), comps);
}

inline LawvereFunctor linton_to_lawvere(const Presheaf& barM, const LintonSetting& s) {
  require(barM.cat.get() == s.theory_fams.cat.get(),
          "linton_to_lawvere: model not on the fiber category");
  const TheoryPresentation& t = *s.t;
  const FinCategory& C = *t.site().cat;
  const int N = t.bound();
  LawvereFunctor m;
  m.J = s.J;
  m.theory = &t;
  enumerate_family_objects(t, m);

  // point values: pv[tt][j] = barM(delta_j(tt))
  std::vector<std::vector<int>> pv_size(N + 1, std::vector<int>(s.J));
  for (int tt = 0; tt <= N; ++tt)
    for (int j = 0; j < s.J; ++j) pv_size[tt][j] = barM.size[delta_obj(s, tt, j)];

  m.at.resize(m.objs.size());
  // block layout per (X, a, b): elements are tuples of point values
  struct Block {
    int a, b;
    std::vector<int> radix;
    int offset;
  };
  std::vector<std::vector<std::vector<Block>>> blocks(m.objs.size());
  for (size_t F = 0; F < m.objs.size(); ++F) {
    auto& [I, A] = m.objs[F];
    PairedSheaf& ps = m.at[F];
    ps.sheaf.cat = t.site().cat;
    ps.sheaf.size.assign(C.object_count, 0);
    ps.grade.resize(C.object_count);
    blocks[F].resize(C.object_count);
    for (int X = 0; X < C.object_count; ++X) {
      for (int a : C.hom(X, I))
        for (int b : C.hom(X, s.J)) {
          const auto& at = t.base->finset.table_of(a);
          const auto& bt = t.base->finset.table_of(b);
          Block blk;
          blk.a = a;
          blk.b = b;
          blk.offset = ps.sheaf.size[X];
          for (int x = 0; x < X; ++x) blk.radix.push_back(pv_size[A[at[x]]][bt[x]]);
          long long n = tuple_count(blk.radix, 1 << 24);
          require(n >= 0, "linton_to_lawvere: block too large");
          ps.sheaf.size[X] += static_cast<int>(n);
          for (int e = 0; e < n; ++e) ps.grade[X].push_back({a, b});
          blocks[F][X].push_back(std::move(blk));
        }
    }
    ps.sheaf.action.resize(C.arrow_count());
    for (int h = 0; h < C.arrow_count(); ++h) {
      int X = C.tgt(h), X2 = C.src(h);
      const auto& ht = t.base->finset.table_of(h);
      auto& tbl = ps.sheaf.action[h];
      tbl.resize(ps.sheaf.size[X]);
      for (const Block& blk : blocks[F][X]) {
        int a2 = C.compose(blk.a, h), b2 = C.compose(blk.b, h);
        const Block* dst = nullptr;
        for (const Block& cand : blocks[F][X2])
          if (cand.a == a2 && cand.b == b2) dst = &cand;
        long long n = tuple_count(blk.radix, 1 << 24);
        for (int e = 0; e < n; ++e) {
          auto tup = tuple_unrank(e, blk.radix);
          std::vector<int> moved(X2);
          for (int x2 = 0; x2 < X2; ++x2) moved[x2] = tup[ht[x2]];
          tbl[blk.offset + e] = dst->offset + tuple_rank(moved, dst->radix);
        }
      }
    }
  }

  // fiber actions: componentwise barM actions on the point values
  for (size_t Ft = 0; Ft < m.objs.size(); ++Ft) {
    auto& [I, At] = m.objs[Ft];
    // enumerate fiber arrows into (I, At): tuples of theory arrows with
    // matching targets; action maps at[Ft] -> at[Fs]
    std::vector<std::vector<int>> homs(I);
    std::vector<int> radix(I);
    bool any = true;
    for (int i = 0; i < I; ++i) {
      homs[i].clear();
      for (int u = 0; u < t.theory->arrow_count(); ++u)
        if (t.theory->tgt(u) == At[i]) homs[i].push_back(u);
      radix[i] = static_cast<int>(homs[i].size());
      if (!radix[i]) any = false;
    }
    if (!any && I > 0) continue;
    for_each_tuple(radix, [&](const std::vector<int>& pick) {
      std::vector<int> comps(I);
      std::vector<int> As(I);
      for (int i = 0; i < I; ++i) {
        comps[i] = homs[i][pick[i]];
        As[i] = t.theory->src(comps[i]);
      }
      int Fs = m.obj_index.at({I, As});
      Nat nat;
      nat.comp.resize(C.object_count);
      for (int X = 0; X < C.object_count; ++X) {
        nat.comp[X].resize(m.at[Ft].sheaf.size[X]);
        for (const Block& blk : blocks[Ft][X]) {
          const auto& at = t.base->finset.table_of(blk.a);
          const auto& bt = t.base->finset.table_of(blk.b);
          const Block* dst = nullptr;
          for (const Block& cand : blocks[Fs][X])
            if (cand.a == blk.a && cand.b == blk.b) dst = &cand;
          long long n = tuple_count(blk.radix, 1 << 24);
          for (int e = 0; e < n; ++e) {
            auto tup = tuple_unrank(e, blk.radix);
            std::vector<int> moved(tup.size());
            for (size_t x = 0; x < tup.size(); ++x)
              moved[x] = barM.act(delta_arr(s, comps[at[x]], bt[x]), tup[x]);
            nat.comp[X][blk.offset + e] = dst->offset + tuple_rank(moved, dst->radix);
          }
        }
      }
      m.fiber_action[{I, comps}] = std::move(nat);
      return true;
    });
  }

  // point restrictions: constant-graded tuples map to the single-slot object
  for (size_t F = 0; F < m.objs.size(); ++F) {
    auto& [I, A] = m.objs[F];
    for (int i0 = 0; i0 < I; ++i0) {
      int Fpt = m.obj_index.at({1, {A[i0]}});
      std::vector<std::vector<int>> table(C.object_count);
      for (int X = 0; X < C.object_count; ++X) {
        table[X].assign(m.at[F].sheaf.size[X], -1);
        std::vector<int> const_tbl(X, i0);
        int const_a = t.base->finset.arrow_of(X, I, const_tbl);
        int bang = t.base->finset.arrow_of(X, 1, std::vector<int>(X, 0));
        for (const Block& blk : blocks[F][X]) {
          if (blk.a != const_a) continue;
          const Block* dst = nullptr;
          for (const Block& cand : blocks[Fpt][X])
            if (cand.a == bang && cand.b == blk.b) dst = &cand;
          long long n = tuple_count(blk.radix, 1 << 24);
          for (int e = 0; e < n; ++e)
            table[X][blk.offset + e] = dst->offset + e;  // same radix layout
        }
      }
      m.point_restriction[{static_cast<int>(F), i0}] = std::move(table);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// alpha: Lawvere functor -> Linton model. The value at a family T over J is
// the set of sections of the sheaf at (J, T) over the diagonal span.

inline Presheaf lawvere_to_linton(const LawvereFunctor& m, const LintonSetting& s) {
  const TheoryPresentation& t = *s.t;
  const FinCategory& C = *t.site().cat;
  const int J = s.J;
  int idJ = C.identity[J];
  Presheaf out;
  out.cat = s.theory_fams.cat;
  out.size.resize(s.theory_fams.obj_tuples.size());
  // per family object: the diagonal sections and their positions
  std::vector<std::vector<int>> sections(out.size.size());
  std::vector<std::vector<int>> position;  //  at[fam].sheaf element -> index
  position.resize(out.size.size());
  for (size_t To = 0; To < s.theory_fams.obj_tuples.size(); ++To) {
    int F = m.obj_index.at({J, s.theory_fams.obj_tuples[To]});
    position[To].assign(m.at[F].sheaf.size[J], -1);
    for (int e = 0; e < m.at[F].sheaf.size[J]; ++e)
      if (m.at[F].grade[J][e] == std::make_pair(idJ, idJ)) {
        position[To][e] = static_cast<int>(sections[To].size());
        sections[To].push_back(e);
      }
    out.size[To] = static_cast<int>(sections[To].size());
  }
  out.action.resize(s.theory_fams.cat->arrow_count());
  for (size_t arr = 0; arr < s.theory_fams.arr_tuples.size(); ++arr) {
    int src = s.theory_fams.cat->src(static_cast<int>(arr));
    int tgt = s.theory_fams.cat->tgt(static_cast<int>(arr));
    const Nat& act = m.fiber_action.at({J, s.theory_fams.arr_tuples[arr]});
    auto& tbl = out.action[arr];
    tbl.resize(out.size[tgt]);
    for (int i = 0; i < out.size[tgt]; ++i)
      tbl[i] = position[src][act.comp[J][sections[tgt][i]]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Round trips with witnessed isomorphisms.

struct PresheafIso {
  Nat forward, backward;
};

/// Canonical isomorphism barM -> alpha(beta(barM)): restrict along the slot
/// inclusions delta_j(T_j) -> T. Returns nullopt with no witness only if the
/// canonical map fails to be a bijection or natural.
inline std::optional<PresheafIso> alpha_beta_roundtrip(const Presheaf& barM,
                                                       const LintonSetting& s) {
  auto m = linton_to_lawvere(barM, s);
  auto back = lawvere_to_linton(m, s);
  const FinCategory& T = *s.t->theory;
  // canonical comparison per family T: s -> (barM(iota_j)(s))_j where
  // iota_j: delta_j(T_j) -> T has slot-j identity and zero maps elsewhere
  Nat fwd;
  fwd.comp.resize(barM.size.size());
  for (size_t To = 0; To < s.theory_fams.obj_tuples.size(); ++To) {
    const auto& tup = s.theory_fams.obj_tuples[To];
    // the alpha(beta) value is the block of diagonal sections: tuples of
    // point values pv(T_j, j) laid out with radix over j in order
    std::vector<int> radix(s.J);
    std::vector<int> iota(s.J);
    for (int j = 0; j < s.J; ++j) {
      radix[j] = barM.size[delta_obj(s, tup[j], j)];
      std::vector<int> comps(s.J);
      for (int j2 = 0; j2 < s.J; ++j2) {
        if (j2 == j) {
          comps[j2] = T.identity[tup[j]];
        } else {
          auto z = T.hom(0, tup[j2]);
          require(z.size() == 1, "alpha_beta_roundtrip: zero object is not initial");
          comps[j2] = z[0];
        }
      }
      std::vector<int> st(s.J, 0);
      st[j] = tup[j];
      iota[j] = s.theory_fams.arr_of(s.theory_fams.obj_of(st), static_cast<int>(To),
                                     comps);
    }
    fwd.comp[To].resize(barM.size[To]);
    for (int x = 0; x < barM.size[To]; ++x) {
      std::vector<int> coords(s.J);
      for (int j = 0; j < s.J; ++j) coords[j] = barM.act(iota[j], x);
      fwd.comp[To][x] = tuple_rank(coords, radix);
    }
  }
  if (!check_natural(barM, back, fwd)) return std::nullopt;
  if (!nat_is_iso(barM, back, fwd)) return std::nullopt;
  PresheafIso iso;
  iso.forward = fwd;
  iso.backward = invert_nat(barM, back, fwd);
  return iso;
}

/// Witnessed comparison beta(alpha(M)) vs M on every family object: the
/// canonical point-decomposition maps, checked bijective and compatible with
/// the fiber actions. Returns per-family-object bijections.
inline std::optional<std::vector<Nat>> beta_alpha_roundtrip(const LawvereFunctor& m,
                                                            const LintonSetting& s) {
  const TheoryPresentation& t = *s.t;
  const FinCategory& C = *t.site().cat;
  auto am = lawvere_to_linton(m, s);
  auto back = linton_to_lawvere(am, s);

  // connector per (theory object tt, slot j): bijection from sections of
  // m.at[(J, delta_j tt)] over the diagonal to the single-slot point values
  // of m at (1, tt) over (id_1, pt_j); inverse is used pointwise
  const int J = s.J;
  int idJ = C.identity[J];
  std::map<std::pair<int, int>, std::map<int, int>> connector_inv;
  for (int tt = 0; tt <= t.bound(); ++tt)
    for (int j = 0; j < J; ++j) {
      std::vector<int> tup(J, 0);
      tup[j] = tt;
      int F = m.obj_index.at({J, tup});
      int ptj = t.base->finset.arrow_of(1, J, {j});
      const auto& pr = m.point_restriction.at({F, j});
      std::map<int, int> inv;
      int count_diag = 0;
      for (int e = 0; e < m.at[F].sheaf.size[J]; ++e) {
        if (m.at[F].grade[J][e] != std::make_pair(idJ, idJ)) continue;
        int diag_index = count_diag++;
        int restricted = m.at[F].sheaf.act(ptj, e);
        int pointval = pr[1][restricted];
        if (pointval < 0) return std::nullopt;
        if (!inv.emplace(pointval, diag_index).second) return std::nullopt;
      }
      connector_inv[{tt, j}] = std::move(inv);
    }

  std::vector<Nat> witness(m.objs.size());
  for (size_t F = 0; F < m.objs.size(); ++F) {
    auto& [I, A] = m.objs[F];
    Nat w;
    w.comp.resize(C.object_count);
    for (int X = 0; X < C.object_count; ++X) {
      w.comp[X].assign(m.at[F].sheaf.size[X], -1);
      // the rebuilt sheaf is block-layered by (a, b) with tuple radix over
      // the alpha point values
      for (int e = 0; e < m.at[F].sheaf.size[X]; ++e) {
        auto [a, b] = m.at[F].grade[X][e];
        const auto& at = t.base->finset.table_of(a);
        const auto& bt = t.base->finset.table_of(b);
        std::vector<int> coords(X);
        std::vector<int> radix(X);
        for (int x = 0; x < X; ++x) {
          int pt = t.base->finset.arrow_of(1, X, {x});
          int sx = m.at[F].sheaf.act(pt, e);
          int pointval = m.point_restriction.at({static_cast<int>(F), at[x]})[1][sx];
          if (pointval < 0) return std::nullopt;
          auto& inv = connector_inv.at({A[at[x]], bt[x]});
          auto it = inv.find(pointval);
          if (it == inv.end()) return std::nullopt;
          coords[x] = it->second;
          radix[x] = am.size[delta_obj(s, A[at[x]], bt[x])];
        }
        // position inside the rebuilt block with the same grade
        int offset = 0;
        for (int bb = 0; bb < back.at[F].sheaf.size[X];) {
          if (back.at[F].grade[X][bb] == std::make_pair(a, b)) {
            offset = bb;
            break;
          }
          ++bb;
        }
        w.comp[X][e] = offset + tuple_rank(coords, radix);
      }
    }
    if (!nat_is_iso(m.at[F].sheaf, back.at[F].sheaf, w)) return std::nullopt;
    if (!check_natural(m.at[F].sheaf, back.at[F].sheaf, w)) return std::nullopt;
    witness[F] = std::move(w);
  }
  // compatibility with the fiber actions
  for (auto& [key, nat] : m.fiber_action) {
    auto& [I, comps] = key;
    std::vector<int> As(comps.size()), At(comps.size());
    for (size_t i = 0; i < comps.size(); ++i) {
      As[i] = t.theory->src(comps[i]);
      At[i] = t.theory->tgt(comps[i]);
    }
    int Fs = m.obj_index.at({I, As});
    int Ft = m.obj_index.at({I, At});
    const Nat& back_nat = back.fiber_action.at(key);
    for (int X = 0; X < C.object_count; ++X)
      for (int e = 0; e < m.at[Ft].sheaf.size[X]; ++e)
        if (witness[Fs].comp[X][nat.comp[X][e]] !=
            back_nat.comp[X][witness[Ft].comp[X][e]])
          return std::nullopt;
  }
  return witness;
}

}  // namespace fincat
