#include <catch2/catch_amalgamated.hpp>

#include "fincat/fibered.hpp"
#include "helpers.hpp"

using namespace fincat;

namespace {

std::shared_ptr<const TruncatedFinSetSite> trunc(int n) {
  return std::make_shared<TruncatedFinSetSite>(n);
}

}  // namespace

TEST_CASE("family fibration fragment is a category with valid chosen lifts") {
  auto t = degenerate_theory(trunc(2));
  auto fp = family_fibration_fragment(t, 2, 1);
  REQUIRE(check_category(*fp.total).ok());
  REQUIRE(fp.total->arrow_count() == 65);  // desk scale
  REQUIRE_FALSE(fp.cart.empty());
  REQUIRE_FALSE(fp.opcart.empty());
  REQUIRE(check_fibered_presentation(fp).ok());
}

TEST_CASE("family fibration fragment of the F2 theory validates") {
  auto t = build_theory(trunc(2), fq_module_family(2));
  auto fp = family_fibration_fragment(t, 1, 1);
  REQUIRE(check_category(*fp.total).ok());
  REQUIRE(check_fibered_presentation(fp).ok());
}

TEST_CASE("corrupting a chosen lift is caught by the validator") {
  auto t = degenerate_theory(trunc(2));
  auto fp = family_fibration_fragment(t, 2, 1);
  // redirect one cartesian lift to a non-cartesian arrow if one exists with
  // the same endpoints and projection
  bool corrupted = false;
  for (auto& [key, lift] : fp.cart) {
    const FinCategory& T = *fp.total;
    for (int other = 0; other < T.arrow_count() && !corrupted; ++other) {
      if (other == lift) continue;
      if (T.src(other) != T.src(lift) || T.tgt(other) != T.tgt(lift)) continue;
      if (fp.projection.arr[other] != fp.projection.arr[lift]) continue;
      fp.cart[key] = other;
      corrupted = true;
    }
    if (corrupted) break;
  }
  if (corrupted) REQUIRE_FALSE(check_fibered_presentation(fp).ok());
}

TEST_CASE("fiber site and componentwise tau validate") {
  auto t = degenerate_theory(trunc(2));
  auto s = linton_setting(t, 2);
  REQUIRE(check_category(*s.theory_fams.cat).ok());
  REQUIRE(check_site(s.site_fams.site).ok());
  REQUIRE(check_functor(s.tau_J).ok());
  // representables on the fiber category are Linton models
  for (int o = 0; o < std::min(4, s.theory_fams.cat->object_count); ++o)
    REQUIRE(is_linton_model(representable(s.theory_fams.cat, o).presheaf, s));
}

TEST_CASE("alpha reduces to evaluation at the point over the terminal base") {
  auto t = degenerate_theory(trunc(2));
  auto s = linton_setting(t, 1);
  auto y = representable(s.theory_fams.cat, s.theory_fams.obj_of({2}));
  REQUIRE(is_linton_model(y.presheaf, s));
  auto m = linton_to_lawvere(y.presheaf, s);
  REQUIRE(check_lawvere(m).ok());
  auto back = lawvere_to_linton(m, s);
  // evaluation at 1: the diagonal sections over the one-point base are the
  // point values themselves
  for (size_t To = 0; To < s.theory_fams.obj_tuples.size(); ++To)
    REQUIRE(back.size[To] == y.presheaf.size[To]);
}

TEST_CASE("round trips on the degenerate theory over a two-element base") {
  auto t = degenerate_theory(trunc(2));
  auto s = linton_setting(t, 2);
  for (auto tup : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {0, 2}}) {
    auto y = representable(s.theory_fams.cat, s.theory_fams.obj_of(tup));
    REQUIRE(is_linton_model(y.presheaf, s));
    auto m = linton_to_lawvere(y.presheaf, s);
    REQUIRE(check_lawvere(m).ok());
    auto iso = alpha_beta_roundtrip(y.presheaf, s);
    REQUIRE(iso.has_value());
    auto witness = beta_alpha_roundtrip(m, s);
    REQUIRE(witness.has_value());
  }
}

TEST_CASE("round trips on the F2 theory over a two-element base") {
  auto t = build_theory(trunc(2), fq_module_family(2));
  auto s = linton_setting(t, 2);
  auto y = representable(s.theory_fams.cat, s.theory_fams.obj_of({1, 1}));
  REQUIRE(is_linton_model(y.presheaf, s));
  auto m = linton_to_lawvere(y.presheaf, s);
  REQUIRE(check_lawvere(m).ok());
  auto iso = alpha_beta_roundtrip(y.presheaf, s);
  REQUIRE(iso.has_value());
  auto witness = beta_alpha_roundtrip(m, s);
  REQUIRE(witness.has_value());

  // a product of representables is also a Linton model
  auto y2 = representable(s.theory_fams.cat, s.theory_fams.obj_of({2, 0}));
  auto prod = presheaf_product(y.presheaf, y2.presheaf);
  REQUIRE(is_linton_model(prod, s));
  auto iso2 = alpha_beta_roundtrip(prod, s);
  REQUIRE(iso2.has_value());
}

TEST_CASE("a non-multiplicative functor is rejected with a witness") {
  auto t = degenerate_theory(trunc(2));
  auto s = linton_setting(t, 2);
  auto y = representable(s.theory_fams.cat, s.theory_fams.obj_of({1, 1}));
  auto m = linton_to_lawvere(y.presheaf, s);
  REQUIRE(check_lawvere(m).ok());
  // redirect one point restriction so two sections decompose identically
  bool corrupted = false;
  for (auto& [key, table] : m.point_restriction) {
    auto& t1 = table[1];
    int first = -1;
    for (size_t e = 0; e < t1.size() && !corrupted; ++e) {
      if (t1[e] < 0) continue;
      if (first < 0) {
        first = static_cast<int>(e);
      } else if (t1[e] != t1[first]) {
        t1[e] = t1[first];
        corrupted = true;
      }
    }
    if (corrupted) break;
  }
  REQUIRE(corrupted);
  auto rep = check_lawvere(m);
  REQUIRE_FALSE(rep.ok());
}

TEST_CASE("beta agrees with the extension formula where the sums exist") {
  auto t = degenerate_theory(trunc(2));
  auto s = linton_setting(t, 2);
  const FinCategory& C = *t.site().cat;
  auto y = representable(s.theory_fams.cat, s.theory_fams.obj_of({1, 1}));
  auto m = linton_to_lawvere(y.presheaf, s);

  int checked = 0;
  for (size_t F = 0; F < m.objs.size(); ++F) {
    auto& [I, A] = m.objs[F];
    for (int X = 0; X <= t.bound(); ++X)
      for (int a : C.hom(X, I))
        for (int b : C.hom(X, s.J)) {
          const auto& at = t.base->finset.table_of(a);
          const auto& bt = t.base->finset.table_of(b);
          // extension object: slotwise sums of A . a over the fibers of b
          std::vector<int> sums(s.J, 0);
          bool exists = true;
          for (int x = 0; x < X; ++x) {
            sums[bt[x]] += A[at[x]];
            if (sums[bt[x]] > t.bound()) exists = false;
          }
          if (!exists) continue;
          int ext = s.theory_fams.obj_of(sums);
          // count the sections of beta at this span
          int have = 0;
          for (int e = 0; e < m.at[F].sheaf.size[X]; ++e)
            if (m.at[F].grade[X][e] == std::make_pair(a, b)) ++have;
          REQUIRE(have == y.presheaf.size[ext]);
          ++checked;
        }
  }
  REQUIRE(checked > 20);
}
