#pragma once

#include <map>

#include "fincat/presheaf.hpp"

namespace fincat {

/// Finite site: a category with a list of generating cover cocones.
/// A cover is a family of arrows into a common apex; the empty family is the
/// empty cover of its apex.
struct FiniteSite {
  CatPtr cat;
  struct Cover {
    int apex = 0;
    std::vector<int> arrows;
  };
  std::vector<Cover> covers;
};

/// A sieve on U, stored as a membership mask over all arrows of the category.
using Sieve = std::vector<char>;

/// Sieve generated by a cover: arrows factoring through some cover arrow.
inline Sieve sieve_of_cover(const FinCategory& c, const FiniteSite::Cover& cov) {
  Sieve s(c.arrow_count(), 0);
  for (int f : cov.arrows) {
    require(c.tgt(f) == cov.apex, "cover arrow does not land in the apex");
    for (int h = 0; h < c.arrow_count(); ++h)
      if (c.composable(f, h)) s[c.compose(f, h)] = 1;
  }
  return s;
}

inline Sieve maximal_sieve(const FinCategory& c, int apex) {
  Sieve s(c.arrow_count(), 0);
  for (int a = 0; a < c.arrow_count(); ++a)
    if (c.tgt(a) == apex) s[a] = 1;
  return s;
}

/// Pullback sieve h^*(S) = { g : h . g in S } for h: V -> U.
inline Sieve pullback_sieve(const FinCategory& c, const Sieve& s, int h) {
  Sieve r(c.arrow_count(), 0);
  for (int g = 0; g < c.arrow_count(); ++g)
    if (c.composable(h, g) && s[c.compose(h, g)]) r[g] = 1;
  return r;
}

/// A sieve as a subpresheaf of y(U).
struct SievePresheaf {
  Presheaf presheaf;
  std::vector<std::vector<int>> arrows_at;  // element -> arrow id
  std::vector<int> index_of_arrow;          // arrow id -> element index, -1 outside
};

inline SievePresheaf sieve_presheaf(CatPtr cat, const Sieve& s) {
  const FinCategory& c = *cat;
  SievePresheaf r;
  r.presheaf.cat = cat;
  r.presheaf.size.assign(c.object_count, 0);
  r.arrows_at.resize(c.object_count);
  r.index_of_arrow.assign(c.arrow_count(), -1);
  for (int a = 0; a < c.arrow_count(); ++a)
    if (s[a]) {
      r.index_of_arrow[a] = static_cast<int>(r.arrows_at[c.src(a)].size());
      r.arrows_at[c.src(a)].push_back(a);
      ++r.presheaf.size[c.src(a)];
    }
  r.presheaf.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    auto& tbl = r.presheaf.action[a];
    tbl.resize(r.presheaf.size[c.tgt(a)]);
    for (int i = 0; i < static_cast<int>(tbl.size()); ++i) {
      int g = r.arrows_at[c.tgt(a)][i];
      int ga = c.compose(g, a);  // still in the sieve: sieves are closed under precomposition
      tbl[i] = r.index_of_arrow[ga];
    }
  }
  return r;
}

/// Matching families for a sieve S on U against p: Nat(S, p), each family
/// listing one element of p(src g) per arrow g in S.
inline std::vector<Nat> matching_families(const SievePresheaf& s, const Presheaf& p) {
  return all_nats(s.presheaf, p);
}

/// Greedy generating subset of a sieve: arrows through which every sieve
/// arrow factors. Scanning in id order keeps the choice deterministic.
inline std::vector<int> sieve_generators(const FinCategory& c, const Sieve& s) {
  std::vector<int> gens;
  std::vector<char> covered(c.arrow_count(), 0);
  for (int g = 0; g < c.arrow_count(); ++g) {
    if (!s[g] || covered[g]) continue;
    gens.push_back(g);
    for (int h = 0; h < c.arrow_count(); ++h)
      if (c.composable(g, h)) covered[c.compose(g, h)] = 1;
  }
  return gens;
}

/// Matching families enumerated directly on a generating set: a family is a
/// tuple of sections at the generators whose expansions along every shared
/// factorization agree. Much cheaper than the generic search when the
/// generator count is small. Families are produced in lexicographic tuple
/// order of the generator sections.
inline std::vector<Nat> matching_families_generated(const SievePresheaf& s,
                                                    const std::vector<int>& gens,
                                                    const Presheaf& p) {
  const FinCategory& c = *p.cat;
  // factorizations of each sieve element through the generators
  struct Fact {
    int gen_pos, h;
  };
  std::vector<std::vector<std::vector<Fact>>> facts(c.object_count);
  for (int w = 0; w < c.object_count; ++w)
    facts[w].resize(s.presheaf.size[w]);
  for (size_t i = 0; i < gens.size(); ++i) {
    int g = gens[i];
    for (int h = 0; h < c.arrow_count(); ++h) {
      if (!c.composable(g, h)) continue;
      int gh = c.compose(g, h);
      int e = s.index_of_arrow[gh];
      if (e >= 0) facts[c.src(h)][e].push_back({static_cast<int>(i), h});
    }
  }
  for (int w = 0; w < c.object_count; ++w)
    for (int e = 0; e < s.presheaf.size[w]; ++e)
      require(!facts[w][e].empty(),
              "matching_families_generated: generators do not generate the sieve");
  std::vector<int> radix(gens.size());
  for (size_t i = 0; i < gens.size(); ++i) radix[i] = p.size[c.src(gens[i])];
  std::vector<Nat> out;
  for_each_tuple(radix, [&](const std::vector<int>& t) {
    Nat fam;
    fam.comp.resize(c.object_count);
    for (int w = 0; w < c.object_count; ++w) {
      fam.comp[w].assign(s.presheaf.size[w], -1);
      for (int e = 0; e < s.presheaf.size[w]; ++e) {
        for (const Fact& f : facts[w][e]) {
          int val = p.act(f.h, t[f.gen_pos]);
          if (fam.comp[w][e] < 0)
            fam.comp[w][e] = val;
          else if (fam.comp[w][e] != val)
            return true;  // incompatible tuple
        }
      }
    }
    out.push_back(std::move(fam));
    return true;
  });
  return out;
}

/// The comparison p(U) -> Match(S, p), x -> (g -> p(g)(x)).
inline Nat comparison_family(const SievePresheaf& s, const Presheaf& p, int x) {
  Nat fam;
  const FinCategory& c = *p.cat;
  fam.comp.resize(c.object_count);
  for (int v = 0; v < c.object_count; ++v) {
    fam.comp[v].resize(s.presheaf.size[v]);
    for (int i = 0; i < s.presheaf.size[v]; ++i)
      fam.comp[v][i] = p.act(s.arrows_at[v][i], x);
  }
  return fam;
}

/// Sheaf-condition verdict, with the offending cover when it fails.
struct SheafReport {
  bool is_sheaf = true;
  int failing_cover = -1;
  std::string reason;
  // non-injectivity witness: two elements with equal restriction families
  int witness_x = -1, witness_y = -1;
};

/// Checks the sheaf condition against every declared cover: the comparison
/// p(apex) -> Match(sieve(cover), p) must be a bijection.
inline SheafReport is_sheaf(const Presheaf& p, const FiniteSite& site) {
  require(p.cat.get() == site.cat.get(), "is_sheaf: presheaf not on the site category");
  SheafReport rep;
  for (size_t ci = 0; ci < site.covers.size(); ++ci) {
    const auto& cov = site.covers[ci];
    auto sp = sieve_presheaf(site.cat, sieve_of_cover(*site.cat, cov));
    auto families = matching_families_generated(sp, cov.arrows, p);
    std::map<std::vector<std::vector<int>>, int> seen;
    bool injective = true;
    for (int x = 0; x < p.size[cov.apex]; ++x) {
      auto fam = comparison_family(sp, p, x);
      auto [it, fresh] = seen.emplace(fam.comp, x);
      if (!fresh) {
        rep.is_sheaf = false;
        rep.failing_cover = static_cast<int>(ci);
        rep.reason = "comparison not injective";
        rep.witness_x = it->second;
        rep.witness_y = x;
        return rep;
      }
    }
    (void)injective;
    if (static_cast<int>(seen.size()) != static_cast<int>(families.size())) {
      rep.is_sheaf = false;
      rep.failing_cover = static_cast<int>(ci);
      rep.reason = "comparison not surjective: " + std::to_string(seen.size()) + " of " +
                   std::to_string(families.size()) + " matching families are restrictions";
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Plus construction.
//
// The per-object minimal covering sieve is the intersection of the generated
// sieves of the declared covers (the maximal sieve when there are none). The
// plus construction replaces p(U) by Match(S_min(U), p). Functoriality needs
// the stability condition S_min(V) <= h^*(S_min(U)) for every h: V -> U,
// which holds when the declared covers generate a genuine topology; it is
// validated here and rejected otherwise.

inline std::vector<Sieve> minimal_sieves(const FiniteSite& site) {
  const FinCategory& c = *site.cat;
  std::vector<Sieve> s(c.object_count);
  for (int u = 0; u < c.object_count; ++u) s[u] = maximal_sieve(c, u);
  for (const auto& cov : site.covers) {
    Sieve cs = sieve_of_cover(c, cov);
    for (int a = 0; a < c.arrow_count(); ++a)
      if (!cs[a]) s[cov.apex][a] = 0;
  }
  return s;
}

inline LawReport check_site(const FiniteSite& site) {
  LawReport rep;
  const FinCategory& c = *site.cat;
  for (size_t ci = 0; ci < site.covers.size(); ++ci)
    for (int f : site.covers[ci].arrows)
      if (c.tgt(f) != site.covers[ci].apex)
        rep.add("cover", "cover " + std::to_string(ci) + " arrow does not share the apex");
  if (!rep.ok()) return rep;
  auto smin = minimal_sieves(site);
  for (int h = 0; h < c.arrow_count(); ++h) {
    int u = c.tgt(h), v = c.src(h);
    Sieve pb = pullback_sieve(c, smin[u], h);
    for (int g = 0; g < c.arrow_count(); ++g)
      if (smin[v][g] && !pb[g]) {
        rep.add("stability", "minimal sieve at " + c.oname(v) +
                                 " is not contained in the pullback along " + c.aname(h));
        return rep;
      }
  }
  return rep;
}

/// One plus step: p+(U) = Match(S_min(U), p), acting by precomposition.
/// Returns the new presheaf and the canonical map p -> p+.
inline std::pair<Presheaf, Nat> plus_step(const Presheaf& p, const FiniteSite& site,
                                          const std::vector<Sieve>& smin) {
  const FinCategory& c = *site.cat;
  std::vector<SievePresheaf> sp(c.object_count);
  std::vector<std::vector<Nat>> fams(c.object_count);
  std::vector<std::map<std::vector<std::vector<int>>, int>> index(c.object_count);
  Presheaf out;
  out.cat = p.cat;
  out.size.assign(c.object_count, 0);
  for (int u = 0; u < c.object_count; ++u) {
    sp[u] = sieve_presheaf(site.cat, smin[u]);
    fams[u] = matching_families_generated(sp[u], sieve_generators(c, smin[u]), p);
    out.size[u] = static_cast<int>(fams[u].size());
    for (int i = 0; i < out.size[u]; ++i) index[u][fams[u][i].comp] = i;
  }
  out.action.resize(c.arrow_count());
  for (int h = 0; h < c.arrow_count(); ++h) {
    int u = c.tgt(h), v = c.src(h);
    out.action[h].resize(out.size[u]);
    for (int i = 0; i < out.size[u]; ++i) {
      // restrict family along h: (g' in S_min(V)) -> fam[h . g']
      Nat moved;
      moved.comp.resize(c.object_count);
      for (int w = 0; w < c.object_count; ++w) {
        moved.comp[w].resize(sp[v].presheaf.size[w]);
        for (int e = 0; e < sp[v].presheaf.size[w]; ++e) {
          int g = sp[v].arrows_at[w][e];
          int hg = c.compose(h, g);
          moved.comp[w][e] = fams[u][i].comp[w][sp[u].index_of_arrow[hg]];
        }
      }
      out.action[h][i] = index[v].at(moved.comp);
    }
  }
  Nat unit;
  unit.comp.resize(c.object_count);
  for (int u = 0; u < c.object_count; ++u) {
    unit.comp[u].resize(p.size[u]);
    for (int x = 0; x < p.size[u]; ++x)
      unit.comp[u][x] = index[u].at(comparison_family(sp[u], p, x).comp);
  }
  return {std::move(out), std::move(unit)};
}

struct SheafifyResult {
  bool converged = false;
  int rounds = 0;
  Presheaf sheaf;
  Nat unit;  // p -> sheaf
};

/// Sheafification by iterating the plus construction (two passes per round)
/// until the sheaf condition holds or the bound is exhausted. A presheaf that
/// is already a sheaf is returned unchanged with the identity unit.
inline SheafifyResult sheafify(const Presheaf& p, const FiniteSite& site, int bound = 8) {
  require(bound >= 1, "sheafify: bound must be positive");
  SheafifyResult r;
  r.sheaf = p;
  r.unit = identity_nat(p);
  auto smin = minimal_sieves(site);
  for (r.rounds = 0; r.rounds < bound; ++r.rounds) {
    if (is_sheaf(r.sheaf, site).is_sheaf) {
      r.converged = true;
      return r;
    }
    for (int pass = 0; pass < 2; ++pass) {
      auto [next, step] = plus_step(r.sheaf, site, smin);
      r.unit = compose_nats(step, r.unit);
      r.sheaf = std::move(next);
    }
  }
  r.converged = is_sheaf(r.sheaf, site).is_sheaf;
  return r;
}

// ---------------------------------------------------------------------------
// Truncated finite-set site with the extensive topology.

/// Site on the skeletal category of finite sets of size <= bound. Covers are
/// the proper binary-sum cocones m = m1 + m2 (canonical block injections)
/// and the empty cover of 0.
struct TruncatedFinSetSite {
  explicit TruncatedFinSetSite(int bound) : finset(bound) {
    site.cat = finset.category();
    site.covers.push_back({0, {}});
    for (int m = 2; m <= bound; ++m)
      for (int m1 = 1; m1 < m; ++m1) {
        int m2 = m - m1;
        std::vector<int> t1(m1), t2(m2);
        for (int i = 0; i < m1; ++i) t1[i] = i;
        for (int i = 0; i < m2; ++i) t2[i] = m1 + i;
        site.covers.push_back(
            {m, {finset.arrow_of(m1, m, t1), finset.arrow_of(m2, m, t2)}});
      }
  }

  int bound() const { return finset.max_size(); }

  FinSetCategory finset;
  FiniteSite site;
};

/// The sheaf corresponding to a plain finite set: X(m) = maps(m, X), with
/// actions by precomposition. Elements at m are tuples ranked lexicographically.
inline Presheaf set_sheaf(const TruncatedFinSetSite& s, int n_points) {
  const FinCategory& c = *s.site.cat;
  Presheaf p;
  p.cat = s.site.cat;
  p.size.resize(c.object_count);
  for (int m = 0; m < c.object_count; ++m) {
    long long v = 1;
    for (int i = 0; i < m; ++i) v *= n_points;
    p.size[m] = static_cast<int>(v);
  }
  p.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a) {
    int m = c.src(a), n = c.tgt(a);
    const auto& f = s.finset.table_of(a);
    p.action[a].resize(p.size[n]);
    std::vector<int> radix(n, n_points);
    for_each_tuple(radix, [&](const std::vector<int>& t) {
      std::vector<int> moved(m);
      for (int i = 0; i < m; ++i) moved[i] = t[f[i]];
      p.action[a][tuple_rank(t, radix)] =
          tuple_rank(moved, std::vector<int>(m, n_points));
      return true;
    });
  }
  return p;
}

}  // namespace fincat
