#pragma once

#include <functional>

#include "fincat/kan.hpp"
#include "fincat/site.hpp"

namespace fincat {

/// Family of free-model carriers defining a locally finite theory: the hom
/// set T(m, n) is the set of m-tuples of elements of the free model on n
/// generators, composed by substitution.
struct TheoryFamily {
  std::string name;
  std::function<int(int)> free_size;       // |F(n)|
  std::function<int(int, int)> generator;  // j-th generator in F(n)
  // subst(n, p, v in F(n), images of the n generators in F(p)) -> F(p)
  std::function<int(int, int, int, const std::vector<int>&)> subst;
  // for commutative theories: elementwise tensor F(n) x F(n') -> F(n*n'),
  // with generator pairs mapped by (j, j') -> j*n' + j'; empty otherwise
  std::function<int(int, int, int, int)> tensor_elem;
};

/// A theory presented as an identity-on-objects functor tau from a truncated
/// finite-set site into a finite category with the same objects. Models are
/// presheaves on the theory category whose restriction along tau is a sheaf.
struct TheoryPresentation {
  std::shared_ptr<const TruncatedFinSetSite> base;
  CatPtr theory;
  FinFunctor tau;
  std::string name;

  // populated when built from a TheoryFamily: arrow m -> n as its m-tuple
  // over the free model on n, the reverse index, and the family itself
  std::vector<std::vector<int>> arrow_tuple;
  std::map<std::tuple<int, int, std::vector<int>>, int> arrow_index;
  std::optional<TheoryFamily> family;

  const FiniteSite& site() const { return base->site; }
  int bound() const { return base->bound(); }

  /// tau-image of the site point injection 1 -> m hitting j.
  int point_arrow(int m, int j) const {
    return tau.arr[base->finset.arrow_of(1, m, {j})];
  }
};

/// The degenerate theory id: site -> site; its models are exactly the sheaves.
inline TheoryPresentation degenerate_theory(std::shared_ptr<const TruncatedFinSetSite> base) {
  TheoryPresentation t;
  t.base = std::move(base);
  t.theory = t.base->site.cat;
  t.tau = identity_functor(t.theory);
  t.name = "degenerate";
  return t;
}

/// Builds the theory category of a family over a truncated finite-set site.
/// Arrow m -> n is an m-tuple over F(n), ranked lexicographically.
inline TheoryPresentation build_theory(std::shared_ptr<const TruncatedFinSetSite> base,
                                       const TheoryFamily& fam) {
  const int N = base->bound();
  CategoryBuilder b;
  for (int m = 0; m <= N; ++m) b.add_object(std::to_string(m));
  std::map<std::tuple<int, int, std::vector<int>>, int> index;
  std::vector<std::tuple<int, int, std::vector<int>>> arrows;
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      std::vector<int> radix(m, fam.free_size(n));
      for_each_tuple(radix, [&](const std::vector<int>& t) {
        std::string name = "t" + std::to_string(m) + "to" + std::to_string(n);
        for (int v : t) name += "_" + std::to_string(v);
        int id = b.add_arrow(m, n, name);
        index[{m, n, t}] = id;
        arrows.push_back({m, n, t});
        return true;
      });
    }
  for (int m = 0; m <= N; ++m) {
    std::vector<int> idt(m);
    for (int j = 0; j < m; ++j) idt[j] = fam.generator(m, j);
    b.set_identity(m, index.at({m, m, idt}));
  }
  const int count = static_cast<int>(arrows.size());
  for (int g = 0; g < count; ++g) {
    auto& [gn, gp, gt] = arrows[g];
    for (int f = 0; f < count; ++f) {
      auto& [fm, fn, ft] = arrows[f];
      if (fn != gn) continue;
      // (g . f)_j = subst of f_j under g's generator images
      std::vector<int> t(fm);
      for (int j = 0; j < fm; ++j) t[j] = fam.subst(fn, gp, ft[j], gt);
      b.set_composite(g, f, index.at({fm, gp, t}));
    }
  }
  TheoryPresentation t;
  t.base = std::move(base);
  t.theory = b.build();
  t.tau.source = t.base->site.cat;
  t.tau.target = t.theory;
  t.tau.obj.resize(N + 1);
  std::iota(t.tau.obj.begin(), t.tau.obj.end(), 0);
  t.tau.arr.resize(t.base->site.cat->arrow_count());
  for (int a = 0; a < t.base->site.cat->arrow_count(); ++a) {
    const auto& table = t.base->finset.table_of(a);
    int m = t.base->site.cat->src(a), n = t.base->site.cat->tgt(a);
    std::vector<int> img(m);
    for (int j = 0; j < m; ++j) img[j] = fam.generator(n, table[j]);
    t.tau.arr[a] = index.at({m, n, img});
  }
  t.arrow_index = std::move(index);
  t.arrow_tuple.resize(arrows.size());
  for (size_t i = 0; i < arrows.size(); ++i) t.arrow_tuple[i] = std::get<2>(arrows[i]);
  t.family = fam;
  t.name = fam.name;
  return t;
}

/// Modules over the prime field F_q: free model on n generators is F_q^n,
/// arrows are matrices in column layout.
inline TheoryFamily fq_module_family(int q) {
  TheoryFamily f;
  f.name = "f" + std::to_string(q) + "-module";
  auto power = [q](int n) {
    int r = 1;
    for (int i = 0; i < n; ++i) r *= q;
    return r;
  };
  f.free_size = power;
  f.generator = [q, power](int n, int j) {
    // unit vector e_j, digits base q with coordinate 0 most significant
    int r = 1;
    for (int i = j + 1; i < n; ++i) r *= q;
    return r;
  };
  f.subst = [q](int n, int p, int v, const std::vector<int>& img) {
    // v = sum of v_i e_i; result = sum v_i * img[i] over F_q, digitwise mod q
    std::vector<int> digits(n);
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = v % q;
      v /= q;
    }
    std::vector<int> acc(p, 0);
    for (int i = 0; i < n; ++i) {
      int w = img[i];
      for (int d = p - 1; d >= 0; --d) {
        acc[d] = (acc[d] + digits[i] * (w % q)) % q;
        w /= q;
      }
    }
    int r = 0;
    for (int d = 0; d < p; ++d) r = r * q + acc[d];
    return r;
  };
  f.tensor_elem = [q](int n, int np, int v, int w) {
    std::vector<int> dv(n), dw(np);
    for (int i = n - 1; i >= 0; --i) {
      dv[i] = v % q;
      v /= q;
    }
    for (int i = np - 1; i >= 0; --i) {
      dw[i] = w % q;
      w /= q;
    }
    int r = 0;
    for (int k = 0; k < n; ++k)
      for (int kp = 0; kp < np; ++kp) r = r * q + dv[k] * dw[kp] % q;
    return r;
  };
  return f;
}

/// Pointed sets: free model on n generators is n + a basepoint (encoded n).
inline TheoryFamily pointed_set_family() {
  TheoryFamily f;
  f.name = "pointed-set";
  f.free_size = [](int n) { return n + 1; };
  f.generator = [](int, int j) { return j; };
  f.subst = [](int n, int p, int v, const std::vector<int>& img) {
    return v == n ? p : img[v];
  };
  // smash product: the basepoint absorbs
  f.tensor_elem = [](int n, int np, int v, int w) {
    if (v == n || w == np) return n * np;
    return v * np + w;
  };
  return f;
}

/// Idempotent commutative monoids: free model on n generators is the power
/// set of n under union, encoded as bitmasks.
inline TheoryFamily semilattice_family() {
  TheoryFamily f;
  f.name = "idempotent-commutative-monoid";
  f.free_size = [](int n) { return 1 << n; };
  f.generator = [](int, int j) { return 1 << j; };
  f.subst = [](int n, int, int v, const std::vector<int>& img) {
    int acc = 0;
    for (int i = 0; i < n; ++i)
      if (v >> i & 1) acc |= img[i];
    return acc;
  };
  f.tensor_elem = [](int n, int np, int v, int w) {
    int acc = 0;
    for (int k = 0; k < n; ++k)
      for (int kp = 0; kp < np; ++kp)
        if ((v >> k & 1) && (w >> kp & 1)) acc |= 1 << (k * np + kp);
    return acc;
  };
  return f;
}

/// The degenerate theory as a family (free model on n is n itself); useful
/// when the identity theory needs tensor data.
inline TheoryFamily degenerate_family() {
  TheoryFamily f;
  f.name = "degenerate";
  f.free_size = [](int n) { return n; };
  f.generator = [](int, int j) { return j; };
  f.subst = [](int, int, int v, const std::vector<int>& img) { return img[v]; };
  f.tensor_elem = [](int, int np, int v, int w) { return v * np + w; };
  return f;
}

// ---------------------------------------------------------------------------
// Validation and the model condition.

/// Checks identity-on-objects, functor laws, additivity on covers (tau sends
/// cover cocones to coproduct cocones), and subcanonicity (representables on
/// the theory restrict to sheaves).
inline LawReport validate_theory(const TheoryPresentation& t) {
  LawReport rep;
  const FinCategory& T = *t.theory;
  const FiniteSite& site = t.site();
  if (T.object_count != site.cat->object_count) {
    rep.add("identity-on-objects", "object counts differ");
    return rep;
  }
  for (int o = 0; o < T.object_count; ++o)
    if (t.tau.obj[o] != o) {
      rep.add("identity-on-objects", "tau moves object " + site.cat->oname(o));
      return rep;
    }
  auto fr = check_functor(t.tau);
  for (auto& v : fr.violations) rep.add("functor", v.detail);
  if (!rep.ok()) return rep;

  // additivity: for each cover {f_i: U_i -> U}, precomposition with the
  // tau f_i is a bijection hom(U, S) -> prod_i hom(U_i, S) for every S
  for (size_t ci = 0; ci < site.covers.size(); ++ci) {
    const auto& cov = site.covers[ci];
    for (int S = 0; S < T.object_count; ++S) {
      std::map<std::vector<int>, int> seen;
      long long expected = 1;
      for (int f : cov.arrows) expected *= T.hom(site.cat->src(f), S).size();
      for (int g : T.hom(cov.apex, S)) {
        std::vector<int> key;
        key.reserve(cov.arrows.size());
        for (int f : cov.arrows) key.push_back(T.compose(g, t.tau.arr[f]));
        if (!seen.emplace(key, g).second) {
          rep.add("additivity", "cover " + std::to_string(ci) +
                                    " is not jointly epic at object " + T.oname(S));
          break;
        }
      }
      if (!rep.ok()) return rep;
      if (static_cast<long long>(T.hom(cov.apex, S).size()) != expected) {
        rep.add("additivity", "cover " + std::to_string(ci) + " at object " + T.oname(S) +
                                  ": hom count " +
                                  std::to_string(T.hom(cov.apex, S).size()) + " != " +
                                  std::to_string(expected));
        return rep;
      }
    }
  }

  for (int obj = 0; obj < T.object_count; ++obj) {
    auto y = representable(t.theory, obj);
    auto sheaf = is_sheaf(restrict_presheaf(t.tau, y.presheaf), site);
    if (!sheaf.is_sheaf) {
      rep.add("subcanonicity", "y(" + T.oname(obj) + ") restricts to a non-sheaf: " +
                                   sheaf.reason);
      return rep;
    }
  }
  return rep;
}

inline bool model_of(const Presheaf& p, const TheoryPresentation& t) {
  return is_sheaf(restrict_presheaf(t.tau, p), t.site()).is_sheaf;
}

inline Presheaf forget_model(const Presheaf& m, const TheoryPresentation& t) {
  return restrict_presheaf(t.tau, m);
}

// ---------------------------------------------------------------------------
// Presheaf congruence: the pointwise quotient generated by pairs, closed
// under the presheaf actions.

struct PresheafQuotient {
  Presheaf presheaf;
  Nat projection;
};

inline PresheafQuotient presheaf_quotient(const Presheaf& p,
                                          const std::vector<std::array<int, 3>>& pairs) {
  const FinCategory& c = *p.cat;
  std::vector<int> base(c.object_count + 1, 0);
  for (int o = 0; o < c.object_count; ++o) base[o + 1] = base[o] + p.size[o];
  UnionFind uf(base[c.object_count]);
  std::vector<std::vector<int>> arrows_into(c.object_count);
  for (int a = 0; a < c.arrow_count(); ++a) arrows_into[c.tgt(a)].push_back(a);

  std::vector<std::pair<int, std::pair<int, int>>> work;  // (obj, (x, y))
  for (auto& [o, x, y] : pairs) work.push_back({o, {x, y}});
  while (!work.empty()) {
    auto [o, xy] = work.back();
    work.pop_back();
    auto [x, y] = xy;
    if (!uf.unite(base[o] + x, base[o] + y)) continue;
    for (int a : arrows_into[o]) {
      int s = c.src(a);
      int ax = p.act(a, x), ay = p.act(a, y);
      if (!uf.same(base[s] + ax, base[s] + ay)) work.push_back({s, {ax, ay}});
    }
  }
  auto [cls, count] = uf.compress();
  (void)count;
  // classes per object, renumbered densely per object
  PresheafQuotient out;
  out.presheaf.cat = p.cat;
  out.presheaf.size.assign(c.object_count, 0);
  out.projection.comp.resize(c.object_count);
  std::vector<int> local(cls.size(), -1);
  for (int o = 0; o < c.object_count; ++o) {
    out.projection.comp[o].resize(p.size[o]);
    for (int x = 0; x < p.size[o]; ++x) {
      int g = cls[base[o] + x];
      if (local[g] < 0) local[g] = out.presheaf.size[o]++;
      out.projection.comp[o][x] = local[g];
    }
  }
  out.presheaf.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    int s = c.src(a), t = c.tgt(a);
    out.presheaf.action[a].assign(out.presheaf.size[t], -1);
    for (int x = 0; x < p.size[t]; ++x)
      out.presheaf.action[a][out.projection.comp[t][x]] =
          out.projection.comp[s][p.act(a, x)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Modelification: reflects a presheaf on the theory into the models by
// repairing the comparison map of every cover. Missing matching families are
// glued in along a representable; collisions are identified by congruence.

struct ReflectionResult {
  bool converged = false;
  int rounds = 0;
  Presheaf model;
  Nat unit;  // input -> model
};

inline ReflectionResult modelify(const Presheaf& input, const TheoryPresentation& t,
                                 int bound = 8) {
  require(input.cat.get() == t.theory.get(), "modelify: presheaf not on the theory");
  const FinCategory& T = *t.theory;
  const FiniteSite& site = t.site();
  const FinCategory& C = *site.cat;

  ReflectionResult r;
  r.model = input;
  r.unit = identity_nat(input);

  std::vector<Sieve> sieves;
  sieves.reserve(site.covers.size());
  for (auto& cov : site.covers) sieves.push_back(sieve_of_cover(C, cov));
  std::vector<SievePresheaf> sp;
  sp.reserve(sieves.size());
  for (auto& s : sieves) sp.push_back(sieve_presheaf(site.cat, s));

  // comparison family of a model element, computed through tau directly
  auto cmp_family = [&](size_t ci, int x) {
    std::vector<std::vector<int>> comp(C.object_count);
    for (int w = 0; w < C.object_count; ++w) {
      comp[w].resize(sp[ci].presheaf.size[w]);
      for (int e = 0; e < sp[ci].presheaf.size[w]; ++e)
        comp[w][e] = r.model.act(t.tau.arr[sp[ci].arrows_at[w][e]], x);
    }
    return comp;
  };

  // merge elements with equal comparison families until none collide;
  // strictly size-decreasing, so this terminates
  auto merge_collisions = [&]() {
    bool merged_any = true;
    while (merged_any) {
      merged_any = false;
      for (size_t ci = 0; ci < site.covers.size(); ++ci) {
        const int U = site.covers[ci].apex;
        std::map<std::vector<std::vector<int>>, int> seen;
        std::vector<std::array<int, 3>> pairs;
        for (int x = 0; x < r.model.size[U]; ++x) {
          auto fam = cmp_family(ci, x);
          auto [it, fresh] = seen.emplace(std::move(fam), x);
          if (!fresh) pairs.push_back({U, it->second, x});
        }
        if (pairs.empty()) continue;
        auto q = presheaf_quotient(r.model, pairs);
        r.unit = compose_nats(q.projection, r.unit);
        r.model = std::move(q.presheaf);
        merged_any = true;
      }
    }
  };

  for (r.rounds = 0; r.rounds < bound; ++r.rounds) {
    merge_collisions();
    if (model_of(r.model, t)) {
      r.converged = true;
      return r;
    }
    for (size_t ci = 0; ci < site.covers.size(); ++ci) {
      const auto& cov = site.covers[ci];
      const int U = cov.apex;
      // growth guard: instances whose family count or element count runs
      // away are outside desk scale and reported as not converged
      {
        std::vector<int> radix;
        for (int f : cov.arrows) radix.push_back(r.model.size[C.src(f)]);
        if (tuple_count(radix, 1 << 20) < 0 || r.model.total_elements() > (1 << 21)) {
          r.converged = false;
          return r;
        }
      }
      Presheaf rp = restrict_presheaf(t.tau, r.model);
      auto families = matching_families_generated(sp[ci], cov.arrows, rp);
      std::map<std::vector<std::vector<int>>, int> family_index;
      for (int i = 0; i < static_cast<int>(families.size()); ++i)
        family_index[families[i].comp] = i;
      std::vector<char> hit(families.size(), 0);
      for (int x = 0; x < r.model.size[U]; ++x)
        hit[family_index.at(cmp_family(ci, x))] = 1;
      std::vector<int> missing;
      for (int i = 0; i < static_cast<int>(families.size()); ++i)
        if (!hit[i]) missing.push_back(i);
      if (missing.empty()) continue;

      // glue one representable per missing family, built in a single pass
      auto yu = representable(t.theory, U);
      const int copies = static_cast<int>(missing.size());
      Presheaf glued;
      glued.cat = r.model.cat;
      glued.size.resize(T.object_count);
      std::vector<int> base(T.object_count);
      for (int o = 0; o < T.object_count; ++o) {
        base[o] = r.model.size[o];
        glued.size[o] = base[o] + copies * yu.presheaf.size[o];
      }
      glued.action.resize(T.arrow_count());
      for (int a = 0; a < T.arrow_count(); ++a) {
        int s = T.src(a), tt = T.tgt(a);
        auto& tbl = glued.action[a];
        tbl.resize(glued.size[tt]);
        for (int x = 0; x < r.model.size[tt]; ++x) tbl[x] = r.model.act(a, x);
        for (int k = 0; k < copies; ++k)
          for (int x = 0; x < yu.presheaf.size[tt]; ++x)
            tbl[base[tt] + k * yu.presheaf.size[tt] + x] =
                base[s] + k * yu.presheaf.size[s] + yu.presheaf.act(a, x);
      }
      Nat incl;
      incl.comp.resize(T.object_count);
      for (int o = 0; o < T.object_count; ++o) {
        incl.comp[o].resize(r.model.size[o]);
        std::iota(incl.comp[o].begin(), incl.comp[o].end(), 0);
      }
      // for each sieve arrow g: c -> U and h: T' -> c in the theory, the
      // element tau(g) . h of the glued copy is identified with model(h)(mu(g))
      std::vector<std::array<int, 3>> pairs;
      for (int k = 0; k < copies; ++k) {
        const Nat& mu = families[missing[k]];
        for (int cobj = 0; cobj < C.object_count; ++cobj)
          for (int e = 0; e < sp[ci].presheaf.size[cobj]; ++e) {
            int g = sp[ci].arrows_at[cobj][e];
            int mu_val = mu.comp[cobj][e];
            for (int h = 0; h < T.arrow_count(); ++h) {
              if (T.tgt(h) != cobj) continue;
              int lhs_arrow = T.compose(t.tau.arr[g], h);
              int o = T.src(h);
              pairs.push_back({o,
                               base[o] + k * yu.presheaf.size[o] +
                                   yu.index_of_arrow[lhs_arrow],
                               r.model.act(h, mu_val)});
            }
          }
      }
      auto q = presheaf_quotient(glued, pairs);
      r.unit = compose_nats(compose_nats(q.projection, incl), r.unit);
      r.model = std::move(q.presheaf);
      merge_collisions();
    }
  }
  merge_collisions();
  r.converged = model_of(r.model, t);
  return r;
}

/// Free model on a sheaf: left Kan extension along tau followed by
/// modelification. The unit is a sheaf map x -> forget(free).
inline ReflectionResult free_model(const Presheaf& x, const TheoryPresentation& t,
                                   int bound = 8) {
  require(is_sheaf(x, t.site()).is_sheaf, "free_model: input is not a sheaf");
  auto l = lan(t.tau, x);
  auto refl = modelify(l.presheaf, t, bound);
  ReflectionResult r;
  r.converged = refl.converged;
  r.rounds = refl.rounds;
  r.model = std::move(refl.model);
  // x -> restrict(tau, lan) -> restrict(tau, model); tau is identity on
  // objects so components transport directly
  r.unit.comp.resize(x.size.size());
  for (size_t o = 0; o < x.size.size(); ++o) {
    r.unit.comp[o].resize(x.size[o]);
    for (int e = 0; e < x.size[o]; ++e)
      r.unit.comp[o][e] = refl.unit.comp[o][l.unit.comp[o][e]];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Finite algebras: the concrete face of a model.

/// Carrier with one operation table per theory arrow 1 -> n, stored as a
/// function carrier^n -> carrier with tuple-ranked input.
struct FiniteAlgebra {
  const TheoryPresentation* theory = nullptr;
  int carrier = 0;
  std::map<int, std::vector<int>> op;  // theory arrow id -> table

  int apply(int arrow, const std::vector<int>& args) const {
    const auto& tbl = op.at(arrow);
    int rank = 0;
    for (int a : args) rank = rank * carrier + a;
    return tbl[rank];
  }
};

/// Free algebra on k generators, read off the theory family directly:
/// carrier F(k), operation of theta in T(1, n) by substitution. Generators
/// are the family generator elements.
inline FiniteAlgebra free_algebra(const TheoryPresentation& t, int k) {
  require(t.family.has_value(), "free_algebra: theory was not built from a family");
  const TheoryFamily& fam = *t.family;
  FiniteAlgebra a;
  a.theory = &t;
  a.carrier = fam.free_size(k);
  const FinCategory& T = *t.theory;
  for (int n = 0; n <= t.bound(); ++n)
    for (int arrow : T.hom(1, n)) {
      int theta = t.arrow_tuple[arrow][0];  // element of F(n)
      auto& tbl = a.op[arrow];
      std::vector<int> radix(n, a.carrier);
      tbl.assign(std::max<long long>(1, tuple_count(radix, 1LL << 40)), -1);
      for_each_tuple(radix, [&](const std::vector<int>& x) {
        tbl[tuple_rank(x, radix)] = fam.subst(n, k, theta, x);
        return true;
      });
    }
  return a;
}

/// Extracts the algebra of a model: carrier = m(1), operations from the
/// arrows 1 -> n via the product bijection m(n) = m(1)^n.
inline FiniteAlgebra algebra_of_model(const Presheaf& m, const TheoryPresentation& t) {
  const FinCategory& T = *t.theory;
  FiniteAlgebra a;
  a.theory = &t;
  a.carrier = m.size[1];
  const int N = t.bound();
  // product bijections: tuple rank -> element of m(n)
  std::vector<std::vector<int>> from_tuple(N + 1);
  for (int n = 0; n <= N; ++n) {
    std::vector<int> radix(n, a.carrier);
    from_tuple[n].assign(std::max<long long>(1, tuple_count(radix, 1 << 30)), -1);
    std::vector<int> points(n);
    for (int j = 0; j < n; ++j) points[j] = t.point_arrow(n, j);
    for (int z = 0; z < m.size[n]; ++z) {
      int rank = 0;
      for (int j = 0; j < n; ++j) rank = rank * a.carrier + m.act(points[j], z);
      require(from_tuple[n][rank] == -1,
              "algebra_of_model: point evaluations do not separate m(" +
                  std::to_string(n) + "); not a model");
      from_tuple[n][rank] = z;
    }
    for (int v : from_tuple[n])
      require(v >= 0, "algebra_of_model: m(" + std::to_string(n) +
                          ") is not the full power of m(1); not a model");
  }
  for (int n = 0; n <= N; ++n)
    for (int arrow : T.hom(1, n)) {
      std::vector<int>& tbl = a.op[arrow];
      tbl.resize(from_tuple[n].size());
      for (size_t rank = 0; rank < from_tuple[n].size(); ++rank)
        tbl[rank] = m.act(arrow, from_tuple[n][rank]);
    }
  return a;
}

/// Rebuilds the model presheaf of an algebra: m(n) = carrier^n tuple-ranked,
/// the action of psi: k -> l has j-th coordinate given by psi . tau(e_j).
inline Presheaf model_of_algebra(const FiniteAlgebra& a) {
  const TheoryPresentation& t = *a.theory;
  const FinCategory& T = *t.theory;
  const int N = t.bound();
  Presheaf m;
  m.cat = t.theory;
  m.size.resize(T.object_count);
  for (int n = 0; n <= N; ++n) {
    long long s = 1;
    for (int i = 0; i < n; ++i) s *= a.carrier;
    m.size[n] = static_cast<int>(s);
  }
  m.action.resize(T.arrow_count());
  for (int psi = 0; psi < T.arrow_count(); ++psi) {
    int k = T.src(psi), l = T.tgt(psi);
    m.action[psi].resize(m.size[l]);
    std::vector<int> coord(k);
    for (int j = 0; j < k; ++j) coord[j] = T.compose(psi, t.point_arrow(k, j));
    std::vector<int> radix(l, a.carrier);
    for_each_tuple(radix, [&](const std::vector<int>& x) {
      int out = 0;
      for (int j = 0; j < k; ++j) out = out * a.carrier + a.apply(coord[j], x);
      m.action[psi][tuple_rank(x, radix)] = out;
      return true;
    });
  }
  return m;
}

/// Validity of an algebra = functoriality of its rebuilt model.
inline LawReport check_algebra(const FiniteAlgebra& a) {
  return check_presheaf(model_of_algebra(a));
}

// ---------------------------------------------------------------------------
// Congruence closure and quotient algebras.

struct AlgebraQuotient {
  FiniteAlgebra algebra;
  std::vector<int> projection;  // carrier -> quotient carrier
};

/// Smallest congruence containing the pairs: union-find closed under every
/// operation table, then the induced quotient algebra.
inline AlgebraQuotient congruence_quotient(const FiniteAlgebra& a,
                                           const std::vector<std::pair<int, int>>& pairs) {
  UnionFind uf(a.carrier);
  for (auto& [x, y] : pairs) uf.unite(x, y);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [arrow, tbl] : a.op) {
      int n = a.theory->theory->tgt(arrow);
      std::vector<int> radix(n, a.carrier);
      // group tuples by their class-tuple; all outputs in a group must merge
      std::map<std::vector<int>, int> leader;
      for_each_tuple(radix, [&](const std::vector<int>& x) {
        std::vector<int> key(n);
        for (int j = 0; j < n; ++j) key[j] = uf.find(x[j]);
        int out = tbl[tuple_rank(x, radix)];
        auto [it, fresh] = leader.emplace(key, out);
        if (!fresh && uf.unite(it->second, out)) changed = true;
        return true;
      });
    }
  }
  auto [cls, count] = uf.compress();
  AlgebraQuotient out;
  out.projection = cls;
  out.algebra.theory = a.theory;
  out.algebra.carrier = count;
  for (auto& [arrow, tbl] : a.op) {
    int n = a.theory->theory->tgt(arrow);
    std::vector<int> radix(n, a.carrier);
    std::vector<int> qradix(n, count);
    auto& q = out.algebra.op[arrow];
    q.assign(std::max<long long>(1, tuple_count(qradix, 1 << 30)), -1);
    for_each_tuple(radix, [&](const std::vector<int>& x) {
      std::vector<int> key(n);
      for (int j = 0; j < n; ++j) key[j] = cls[x[j]];
      q[tuple_rank(key, qradix)] = cls[tbl[tuple_rank(x, radix)]];
      return true;
    });
  }
  return out;
}

/// Extends a partial generator assignment to a full homomorphism by forcing
/// along the operation tables; nullopt when no extension exists. The source
/// must be generated by the assigned elements under its operations.
inline std::optional<std::vector<int>> force_hom(const FiniteAlgebra& a,
                                                 const FiniteAlgebra& b,
                                                 const std::vector<std::pair<int, int>>& gen) {
  std::vector<int> img(a.carrier, -1);
  for (auto& [x, y] : gen) {
    if (img[x] >= 0 && img[x] != y) return std::nullopt;
    img[x] = y;
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto& [arrow, tbl] : a.op) {
      int n = a.theory->theory->tgt(arrow);
      std::vector<int> radix(n, a.carrier);
      bool ok = for_each_tuple(radix, [&](const std::vector<int>& x) {
        std::vector<int> ximg(n);
        for (int j = 0; j < n; ++j) {
          if (img[x[j]] < 0) return true;
          ximg[j] = img[x[j]];
        }
        int out = tbl[tuple_rank(x, radix)];
        int want = b.apply(arrow, ximg);
        if (img[out] < 0) {
          img[out] = want;
          progress = true;
        } else if (img[out] != want) {
          return false;
        }
        return true;
      });
      if (!ok) return std::nullopt;
    }
  }
  for (int v : img)
    if (v < 0) return std::nullopt;  // not generated by the assignment
  return img;
}

/// All algebra homomorphisms a -> b, by backtracking with operation forcing.
inline std::vector<std::vector<int>> algebra_homs(const FiniteAlgebra& a,
                                                  const FiniteAlgebra& b) {
  std::vector<std::vector<int>> out;
  std::vector<int> img(a.carrier, -1);

  // closure: returns false on conflict, pushes forced assignments
  std::function<bool(std::vector<int>&)> close = [&](std::vector<int>& im) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& [arrow, tbl] : a.op) {
        int n = a.theory->theory->tgt(arrow);
        std::vector<int> radix(n, a.carrier);
        bool ok = for_each_tuple(radix, [&](const std::vector<int>& x) {
          std::vector<int> ximg(n);
          for (int j = 0; j < n; ++j) {
            if (im[x[j]] < 0) return true;
            ximg[j] = im[x[j]];
          }
          int out_el = tbl[tuple_rank(x, radix)];
          int want = b.apply(arrow, ximg);
          if (im[out_el] < 0) {
            im[out_el] = want;
            progress = true;
          } else if (im[out_el] != want) {
            return false;
          }
          return true;
        });
        if (!ok) return false;
      }
    }
    return true;
  };

  std::function<void(std::vector<int>)> rec = [&](std::vector<int> im) {
    if (!close(im)) return;
    int next = -1;
    for (int i = 0; i < a.carrier; ++i)
      if (im[i] < 0) {
        next = i;
        break;
      }
    if (next < 0) {
      out.push_back(im);
      return;
    }
    for (int v = 0; v < b.carrier; ++v) {
      auto trial = im;
      trial[next] = v;
      rec(std::move(trial));
    }
  };
  rec(img);
  std::sort(out.begin(), out.end());
  return out;
}

/// Canonical witnessed isomorphism between two models, forced from a partial
/// assignment at object 1 (typically generator images). Returns the natural
/// transformation on the original presheaves when the forced map is bijective
/// and natural, together with its inverse.
struct WitnessedIso {
  Nat forward;
  Nat backward;
};

inline std::optional<WitnessedIso> model_iso_from_generators(
    const Presheaf& ma, const Presheaf& mb, const TheoryPresentation& t,
    const std::vector<std::pair<int, int>>& gen) {
  FiniteAlgebra a = algebra_of_model(ma, t);
  FiniteAlgebra b = algebra_of_model(mb, t);
  auto h = force_hom(a, b, gen);
  if (!h) return std::nullopt;
  if (a.carrier != b.carrier) return std::nullopt;
  std::vector<char> hit(b.carrier, 0);
  for (int v : *h) {
    if (hit[v]) return std::nullopt;
    hit[v] = 1;
  }
  // transport carrier map to components on the original presheaves through
  // the point-evaluation bijections
  const int N = t.bound();
  auto eval_index = [&](const Presheaf& m, int carrier) {
    std::vector<std::map<std::vector<int>, int>> idx(N + 1);
    std::vector<std::vector<std::vector<int>>> evals(N + 1);
    (void)carrier;
    for (int n = 0; n <= N; ++n) {
      evals[n].resize(m.size[n]);
      for (int z = 0; z < m.size[n]; ++z) {
        std::vector<int> e(n);
        for (int j = 0; j < n; ++j) e[j] = m.act(t.point_arrow(n, j), z);
        evals[n][z] = e;
        idx[n][e] = z;
      }
    }
    return std::make_pair(evals, idx);
  };
  auto [ea, ia] = eval_index(ma, a.carrier);
  auto [eb, ib] = eval_index(mb, b.carrier);
  WitnessedIso w;
  w.forward.comp.resize(t.theory->object_count);
  w.backward.comp.resize(t.theory->object_count);
  for (int n = 0; n <= N; ++n) {
    w.forward.comp[n].resize(ma.size[n]);
    for (int z = 0; z < ma.size[n]; ++z) {
      std::vector<int> e = ea[n][z];
      for (auto& v : e) v = (*h)[v];
      auto it = ib[n].find(e);
      if (it == ib[n].end()) return std::nullopt;
      w.forward.comp[n][z] = it->second;
    }
    w.backward.comp[n].assign(mb.size[n], -1);
    for (int z = 0; z < ma.size[n]; ++z) w.backward.comp[n][w.forward.comp[n][z]] = z;
    for (int v : w.backward.comp[n])
      if (v < 0) return std::nullopt;
  }
  if (!check_natural(ma, mb, w.forward) || !check_natural(mb, ma, w.backward))
    return std::nullopt;
  return w;
}

/// Lifts a carrier map between models to the natural transformation between
/// the model presheaves, through the point-evaluation bijections. The carrier
/// map must be an algebra homomorphism for the result to be natural.
inline Nat nat_of_carrier_map(const Presheaf& ma, const Presheaf& mb,
                              const TheoryPresentation& t, const std::vector<int>& h) {
  const int N = t.bound();
  Nat n;
  n.comp.resize(t.theory->object_count);
  std::vector<std::map<std::vector<int>, int>> index_b(N + 1);
  for (int k = 0; k <= N; ++k) {
    for (int z = 0; z < mb.size[k]; ++z) {
      std::vector<int> e(k);
      for (int j = 0; j < k; ++j) e[j] = mb.act(t.point_arrow(k, j), z);
      index_b[k][e] = z;
    }
    n.comp[k].resize(ma.size[k]);
    for (int z = 0; z < ma.size[k]; ++z) {
      std::vector<int> e(k);
      for (int j = 0; j < k; ++j) e[j] = h[ma.act(t.point_arrow(k, j), z)];
      n.comp[k][z] = index_b[k].at(e);
    }
  }
  return n;
}

}  // namespace fincat
