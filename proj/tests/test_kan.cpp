#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fincat;
using namespace testutil;

namespace {

/// Bifunctor (c1, c2) -> Set(P(c2), Q(c1)); its end is Nat(P, Q).
Bifunctor nat_bifunctor(const Presheaf& p, const Presheaf& q) {
  CatPtr cptr = p.cat;
  const FinCategory& c = *cptr;
  Bifunctor h;
  h.cat = cptr;
  h.size.assign(c.object_count, std::vector<int>(c.object_count, 0));
  for (int c1 = 0; c1 < c.object_count; ++c1)
    for (int c2 = 0; c2 < c.object_count; ++c2) {
      long long n = 1;
      for (int i = 0; i < p.size[c2]; ++i) n *= q.size[c1];
      h.size[c1][c2] = static_cast<int>(n);
    }
  auto rank = [&](const std::vector<int>& fn, int codomain) {
    int r = 0;
    for (int v : fn) r = r * codomain + v;
    return r;
  };
  auto unrank = [&](int r, int domain, int codomain) {
    std::vector<int> fn(domain);
    for (int i = domain - 1; i >= 0; --i) {
      fn[i] = r % codomain;
      r /= codomain;
    }
    return fn;
  };
  h.left.resize(c.arrow_count());
  for (int f = 0; f < c.arrow_count(); ++f) {
    h.left[f].resize(c.object_count);
    int a = c.src(f), b = c.tgt(f);
    for (int c2 = 0; c2 < c.object_count; ++c2) {
      auto& tbl = h.left[f][c2];
      tbl.resize(h.size[b][c2]);
      for (int r = 0; r < static_cast<int>(tbl.size()); ++r) {
        auto fn = unrank(r, p.size[c2], q.size[b]);
        for (auto& v : fn) v = q.act(f, v);  // postcompose with Q(f): Q(b) -> Q(a)
        tbl[r] = rank(fn, q.size[a]);
      }
    }
  }
  h.right.resize(c.object_count);
  for (int c1 = 0; c1 < c.object_count; ++c1) {
    h.right[c1].resize(c.arrow_count());
    for (int f = 0; f < c.arrow_count(); ++f) {
      int a = c.src(f), b = c.tgt(f);
      auto& tbl = h.right[c1][f];
      tbl.resize(h.size[c1][a]);
      for (int r = 0; r < static_cast<int>(tbl.size()); ++r) {
        auto fn = unrank(r, p.size[a], q.size[c1]);
        std::vector<int> moved(p.size[b]);
        for (int x = 0; x < p.size[b]; ++x) moved[x] = fn[p.act(f, x)];  // precompose P(f)
        tbl[r] = rank(moved, q.size[c1]);
      }
    }
  }
  return h;
}

}  // namespace

TEST_CASE("end of the hom bifunctor of the terminal category is a singleton") {
  auto one = terminal_category();
  auto h = hom_bifunctor(one);
  REQUIRE(check_bifunctor(h).ok());
  REQUIRE(end_of(h).size() == 1);
}

TEST_CASE("end of [P, P] over the 2-chain equals the natural endomorphisms") {
  auto wa = walking_arrow();
  Presheaf p;
  p.cat = wa;
  p.size = {3, 2};
  p.action.resize(3);
  p.action[0] = {0, 1, 2};
  p.action[1] = {0, 1};
  p.action[2] = {2, 0};
  REQUIRE(check_presheaf(p).ok());
  auto h = nat_bifunctor(p, p);
  REQUIRE(check_bifunctor(h).ok());
  auto direct = count_nats(p, p);
  REQUIRE(static_cast<long long>(end_of(h).size()) == direct);
}

TEST_CASE("coend of P(c) x Q(c) over a discrete 2-object category is a disjoint sum") {
  auto d2 = discrete_category(2);
  // H(c1, c2) = P(c1) x Q(c2) with sizes P = (2,3), Q = (5,7)
  std::vector<int> ps = {2, 3}, qs = {5, 7};
  Bifunctor h;
  h.cat = d2;
  h.size = {{ps[0] * qs[0], ps[0] * qs[1]}, {ps[1] * qs[0], ps[1] * qs[1]}};
  h.left.resize(2);
  h.right.resize(2);
  for (int f = 0; f < 2; ++f) {  // identities only
    h.left[f].resize(2);
    h.right[f].resize(2);
    for (int c2 = 0; c2 < 2; ++c2) {
      h.left[f][c2].resize(h.size[f][c2]);
      std::iota(h.left[f][c2].begin(), h.left[f][c2].end(), 0);
      h.right[f][c2].resize(h.size[f][c2]);
      std::iota(h.right[f][c2].begin(), h.right[f][c2].end(), 0);
    }
  }
  REQUIRE(check_bifunctor(h).ok());
  auto co = coend_of(h);
  REQUIRE(co.size == ps[0] * qs[0] + ps[1] * qs[1]);
}

TEST_CASE("end and coend agree with the twisted-arrow oracle") {
  auto wa = walking_arrow();
  Presheaf p;
  p.cat = wa;
  p.size = {3, 2};
  p.action.resize(3);
  p.action[0] = {0, 1, 2};
  p.action[1] = {0, 1};
  p.action[2] = {2, 0};
  Presheaf q;
  q.cat = wa;
  q.size = {2, 2};
  q.action.resize(3);
  q.action[0] = {0, 1};
  q.action[1] = {0, 1};
  q.action[2] = {1, 1};
  REQUIRE(check_presheaf(q).ok());

  for (auto* pair : {&p, &q}) {
    auto h = nat_bifunctor(*pair, *pair);
    REQUIRE(static_cast<int>(end_of(h).size()) == end_size_by_twisted_arrow(h));
    REQUIRE(coend_of(h).size == coend_size_by_twisted_arrow(h));
  }
  auto h = nat_bifunctor(p, q);
  REQUIRE(static_cast<int>(end_of(h).size()) == end_size_by_twisted_arrow(h));
  REQUIRE(coend_of(h).size == coend_size_by_twisted_arrow(h));
  auto hb = hom_bifunctor(wa);
  REQUIRE(static_cast<int>(end_of(hb).size()) == end_size_by_twisted_arrow(hb));
  REQUIRE(coend_of(hb).size == coend_size_by_twisted_arrow(hb));
}

TEST_CASE("lan along the identity is isomorphic to the input") {
  FinSetCategory fs(2);
  auto idf = identity_functor(fs.category());
  auto y2 = representable(fs.category(), 2);
  auto l = lan(idf, y2.presheaf);
  REQUIRE(check_presheaf(l.presheaf).ok());
  auto iso = find_iso(l.presheaf, y2.presheaf);
  REQUIRE(iso.has_value());
  // the unit is itself the witness here
  REQUIRE(check_natural(y2.presheaf, l.presheaf, l.unit));
  REQUIRE(nat_is_iso(y2.presheaf, l.presheaf, l.unit));
}

TEST_CASE("lan to the terminal category computes the colimit") {
  auto wa = walking_arrow();
  auto one = terminal_category();
  FinFunctor bang;
  bang.source = wa;
  bang.target = one;
  bang.obj = {0, 0};
  bang.arr = {0, 0, 0};

  Presheaf p;
  p.cat = wa;
  p.size = {3, 2};
  p.action.resize(3);
  p.action[0] = {0, 1, 2};
  p.action[1] = {0, 1};
  p.action[2] = {2, 0};

  auto l = lan(bang, p);
  // colimit of the corresponding diagram on wa^op: classes of {a0,a1,a2,b0,b1}
  // under x ~ P(f)(x): b0 ~ a2, b1 ~ a0: 3 classes
  REQUIRE(l.presheaf.size[0] == 3);

  // oracle: colimit over the opposite category
  auto op = opposite(*wa);
  SetDiagram d = presheaf_as_diagram(p, op);
  REQUIRE(colimit(d).size == 3);
}

TEST_CASE("lan of a representable along an inclusion is the representable at the image") {
  // f: walking arrow -> finite sets sizes<=2, sending a -> 1, b -> 2, arrow to the
  // injection i0: 1 -> 2
  FinSetCategory fs(2);
  auto wa = walking_arrow();
  FinFunctor f;
  f.source = wa;
  f.target = fs.category();
  f.obj = {1, 2};
  std::vector<int> id1 = {0};
  std::vector<int> id2 = {0, 1};
  std::vector<int> i0 = {0};
  f.arr = {fs.arrow_of(1, 1, id1), fs.arrow_of(2, 2, id2), fs.arrow_of(1, 2, i0)};
  REQUIRE(check_functor(f).ok());

  for (int c = 0; c < 2; ++c) {
    auto yc = representable(wa, c);
    auto l = lan(f, yc.presheaf);
    REQUIRE(check_presheaf(l.presheaf).ok());
    auto yfc = representable(fs.category(), f.obj[c]);
    // canonical comparison: class of (c', x: c' -> c, g: d -> f c') -> f(x) . g
    // instead of searching, verify an iso exists and sizes match Yoneda
    auto iso = find_iso(l.presheaf, yfc.presheaf);
    REQUIRE(iso.has_value());
  }
}

TEST_CASE("ran along the identity and ran to the terminal category") {
  auto wa = walking_arrow();
  Presheaf p;
  p.cat = wa;
  p.size = {3, 2};
  p.action.resize(3);
  p.action[0] = {0, 1, 2};
  p.action[1] = {0, 1};
  p.action[2] = {2, 0};

  auto idf = identity_functor(wa);
  auto r = ran(idf, p);
  REQUIRE(check_presheaf(r.presheaf).ok());
  REQUIRE(find_iso(r.presheaf, p).has_value());

  auto one = terminal_category();
  FinFunctor bang;
  bang.source = wa;
  bang.target = one;
  bang.obj = {0, 0};
  bang.arr = {0, 0, 0};
  auto rt = ran(bang, p);
  // limit of P over wa^op: pairs (x_a, x_b) with P(f)(x_b) = x_a: 2 families
  REQUIRE(rt.presheaf.size[0] == 2);
}

TEST_CASE("kan adjunction counts on a 2-object example") {
  FinSetCategory fs(2);
  auto wa = walking_arrow();
  FinFunctor f;
  f.source = wa;
  f.target = fs.category();
  f.obj = {1, 2};
  f.arr = {fs.arrow_of(1, 1, {0}), fs.arrow_of(2, 2, {0, 1}), fs.arrow_of(1, 2, {0})};

  Presheaf p;
  p.cat = wa;
  p.size = {2, 1};
  p.action.resize(3);
  p.action[0] = {0, 1};
  p.action[1] = {0};
  p.action[2] = {1};
  REQUIRE(check_presheaf(p).ok());

  auto y1 = representable(fs.category(), 1);
  auto q = presheaf_product(y1.presheaf, y1.presheaf);  // some presheaf on fin sets

  // hom(lan f p, q) = hom(p, restrict f q)
  auto l = lan(f, p);
  auto rq = restrict_presheaf(f, q);
  REQUIRE(count_nats(l.presheaf, q) == count_nats(p, rq));

  // hom(restrict f q, p') = hom(q, ran f p') for p' = p
  auto r = ran(f, p);
  REQUIRE(count_nats(rq, p) == count_nats(q, r.presheaf));

  // the lan bijection explicitly: alpha -> restrict(f, alpha) . unit
  auto homs_left = all_nats(l.presheaf, q);
  std::vector<std::vector<std::vector<int>>> images;
  for (auto& alpha : homs_left) {
    Nat restricted;
    restricted.comp.resize(wa->object_count);
    for (int c = 0; c < wa->object_count; ++c) {
      restricted.comp[c].resize(p.size[c]);
      for (int x = 0; x < p.size[c]; ++x)
        restricted.comp[c][x] = alpha.comp[f.obj[c]][l.unit.comp[c][x]];
    }
    REQUIRE(check_natural(p, rq, restricted));
    images.push_back(restricted.comp);
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  REQUIRE(static_cast<long long>(images.size()) == count_nats(p, rq));
}
