#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fincat/util.hpp"

namespace fincat {

/// One violated law, with enough data to replay it.
struct LawViolation {
  std::string kind;   // "missing-composite", "endpoint", "identity", "associativity", ...
  std::string detail;
};

struct LawReport {
  std::vector<LawViolation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string kind, std::string detail) {
    violations.push_back({std::move(kind), std::move(detail)});
  }
};

/// Finite category with dense integer ids. Objects are 0..object_count-1,
/// arrows are indices into `arrows`. Composition is a total table on
/// composable pairs: compose(g, f) = g after f.
class FinCategory {
 public:
  struct Arrow {
    int src = 0;
    int tgt = 0;
  };

  int object_count = 0;
  std::vector<Arrow> arrows;
  std::vector<int> identity;             // per object
  std::vector<std::string> object_name;  // optional, for reports
  std::vector<std::string> arrow_name;

  int arrow_count() const { return static_cast<int>(arrows.size()); }
  int src(int a) const { return arrows[a].src; }
  int tgt(int a) const { return arrows[a].tgt; }

  bool composable(int g, int f) const { return src(g) == tgt(f); }

  /// g after f; -1 when not composable or not tabulated.
  int compose(int g, int f) const {
    if (!composable(g, f)) return -1;
    return comp_[static_cast<size_t>(g) * arrows.size() + f];
  }

  void set_composite(int g, int f, int h) {
    comp_[static_cast<size_t>(g) * arrows.size() + f] = h;
  }

  /// Call once after `arrows` is final and before set_composite.
  void allocate_composition() {
    comp_.assign(arrows.size() * arrows.size(), -1);
  }

  std::string oname(int o) const {
    return o < static_cast<int>(object_name.size()) && !object_name[o].empty()
               ? object_name[o]
               : std::to_string(o);
  }
  std::string aname(int a) const {
    return a < static_cast<int>(arrow_name.size()) && !arrow_name[a].empty()
               ? arrow_name[a]
               : "#" + std::to_string(a);
  }

  std::vector<int> arrows_from(int o) const {
    std::vector<int> r;
    for (int a = 0; a < arrow_count(); ++a)
      if (src(a) == o) r.push_back(a);
    return r;
  }
  std::vector<int> arrows_into(int o) const {
    std::vector<int> r;
    for (int a = 0; a < arrow_count(); ++a)
      if (tgt(a) == o) r.push_back(a);
    return r;
  }
  std::vector<int> hom(int a, int b) const {
    std::vector<int> r;
    for (int f = 0; f < arrow_count(); ++f)
      if (src(f) == a && tgt(f) == b) r.push_back(f);
    return r;
  }

 private:
  std::vector<int> comp_;
};

using CatPtr = std::shared_ptr<const FinCategory>;

/// Exhaustive law check: totality of the composition table on composable
/// pairs, endpoint compatibility, identity laws, associativity.
inline LawReport check_category(const FinCategory& c) {
  LawReport rep;
  const int n = c.arrow_count();
  if (static_cast<int>(c.identity.size()) != c.object_count) {
    rep.add("identity", "identity table has wrong length");
    return rep;
  }
  for (int o = 0; o < c.object_count; ++o) {
    int e = c.identity[o];
    if (e < 0 || e >= n) {
      rep.add("identity", "identity of " + c.oname(o) + " is not an arrow");
      return rep;
    }
    if (c.src(e) != o || c.tgt(e) != o)
      rep.add("identity", "identity of " + c.oname(o) + " is not an endo-arrow");
  }
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      if (!c.composable(g, f)) continue;
      int h = c.compose(g, f);
      if (h < 0 || h >= n) {
        rep.add("missing-composite", c.aname(g) + " . " + c.aname(f));
        continue;
      }
      if (c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g))
        rep.add("endpoint", c.aname(g) + " . " + c.aname(f) + " = " + c.aname(h) +
                                " has wrong endpoints");
    }
  if (!rep.ok()) return rep;  // identity/associativity need a well-formed table
  for (int f = 0; f < n; ++f) {
    if (c.compose(c.identity[c.tgt(f)], f) != f)
      rep.add("identity", "id . " + c.aname(f) + " != " + c.aname(f));
    if (c.compose(f, c.identity[c.src(f)]) != f)
      rep.add("identity", c.aname(f) + " . id != " + c.aname(f));
  }
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) {
      if (!c.composable(h, g)) continue;
      int hg = c.compose(h, g);
      for (int f = 0; f < n; ++f) {
        if (!c.composable(g, f)) continue;
        if (c.compose(hg, f) != c.compose(h, c.compose(g, f)))
          rep.add("associativity",
                  "(" + c.aname(h) + " . " + c.aname(g) + ") . " + c.aname(f));
      }
    }
  return rep;
}

/// Functor between finite categories, given by object and arrow tables.
struct FinFunctor {
  CatPtr source;
  CatPtr target;
  std::vector<int> obj;  // object map
  std::vector<int> arr;  // arrow map

  int on_obj(int o) const { return obj[o]; }
  int on_arr(int a) const { return arr[a]; }
};

inline LawReport check_functor(const FinFunctor& f) {
  LawReport rep;
  const FinCategory& s = *f.source;
  const FinCategory& t = *f.target;
  if (static_cast<int>(f.obj.size()) != s.object_count ||
      static_cast<int>(f.arr.size()) != s.arrow_count()) {
    rep.add("totality", "functor tables have wrong length");
    return rep;
  }
  for (int a = 0; a < s.arrow_count(); ++a) {
    int fa = f.arr[a];
    if (fa < 0 || fa >= t.arrow_count()) {
      rep.add("totality", "arrow map out of range at " + s.aname(a));
      return rep;
    }
    if (t.src(fa) != f.obj[s.src(a)] || t.tgt(fa) != f.obj[s.tgt(a)])
      rep.add("endpoint", "image of " + s.aname(a) + " has wrong endpoints");
  }
  for (int o = 0; o < s.object_count; ++o)
    if (f.arr[s.identity[o]] != t.identity[f.obj[o]])
      rep.add("identity", "identity of " + s.oname(o) + " not preserved");
  for (int g = 0; g < s.arrow_count(); ++g)
    for (int fa = 0; fa < s.arrow_count(); ++fa) {
      if (!s.composable(g, fa)) continue;
      if (f.arr[s.compose(g, fa)] != t.compose(f.arr[g], f.arr[fa]))
        rep.add("composition", s.aname(g) + " . " + s.aname(fa) + " not preserved");
    }
  return rep;
}

inline FinFunctor identity_functor(CatPtr c) {
  FinFunctor f;
  f.source = c;
  f.target = c;
  f.obj.resize(c->object_count);
  std::iota(f.obj.begin(), f.obj.end(), 0);
  f.arr.resize(c->arrow_count());
  std::iota(f.arr.begin(), f.arr.end(), 0);
  return f;
}

inline FinFunctor compose_functors(const FinFunctor& g, const FinFunctor& f) {
  require(g.source.get() == f.target.get(), "compose_functors: endpoint mismatch");
  FinFunctor h;
  h.source = f.source;
  h.target = g.target;
  h.obj.reserve(f.obj.size());
  for (int o : f.obj) h.obj.push_back(g.obj[o]);
  h.arr.reserve(f.arr.size());
  for (int a : f.arr) h.arr.push_back(g.arr[a]);
  return h;
}

// ---------------------------------------------------------------------------
// Builders

class CategoryBuilder {
 public:
  int add_object(std::string name = "") {
    cat_.object_name.push_back(std::move(name));
    return cat_.object_count++;
  }

  int add_arrow(int src, int tgt, std::string name = "") {
    cat_.arrows.push_back({src, tgt});
    cat_.arrow_name.push_back(std::move(name));
    return cat_.arrow_count() - 1;
  }

  void set_identity(int obj, int arr) {
    if (static_cast<int>(cat_.identity.size()) <= obj) cat_.identity.resize(obj + 1, -1);
    cat_.identity[obj] = arr;
  }

  void set_composite(int g, int f, int h) { pending_.push_back({g, f, h}); }

  /// Finalizes tables. Does not run check_category; callers do.
  CatPtr build() {
    cat_.identity.resize(cat_.object_count, -1);
    cat_.allocate_composition();
    for (auto& [g, f, h] : pending_) cat_.set_composite(g, f, h);
    // composites with identities default to the identity laws when unset
    for (int f = 0; f < cat_.arrow_count(); ++f) {
      int es = cat_.identity[cat_.src(f)];
      int et = cat_.identity[cat_.tgt(f)];
      if (es >= 0 && cat_.compose(f, es) < 0) cat_.set_composite(f, es, f);
      if (et >= 0 && cat_.compose(et, f) < 0) cat_.set_composite(et, f, f);
    }
    return std::make_shared<FinCategory>(std::move(cat_));
  }

 private:
  FinCategory cat_;
  std::vector<std::array<int, 3>> pending_;
};

/// The terminal category: one object, its identity.
inline CatPtr terminal_category() {
  CategoryBuilder b;
  int o = b.add_object("*");
  int e = b.add_arrow(o, o, "id");
  b.set_identity(o, e);
  b.set_composite(e, e, e);
  return b.build();
}

/// Discrete category on n objects.
inline CatPtr discrete_category(int n) {
  CategoryBuilder b;
  for (int i = 0; i < n; ++i) {
    int o = b.add_object();
    int e = b.add_arrow(o, o);
    b.set_identity(o, e);
    b.set_composite(e, e, e);
  }
  return b.build();
}

/// Opposite category; arrow ids are preserved.
inline CatPtr opposite(const FinCategory& c) {
  FinCategory o;
  o.object_count = c.object_count;
  o.object_name = c.object_name;
  o.arrow_name = c.arrow_name;
  o.identity = c.identity;
  o.arrows.reserve(c.arrows.size());
  for (auto& a : c.arrows) o.arrows.push_back({a.tgt, a.src});
  o.allocate_composition();
  for (int g = 0; g < c.arrow_count(); ++g)
    for (int f = 0; f < c.arrow_count(); ++f)
      if (c.composable(g, f)) o.set_composite(f, g, c.compose(g, f));
  return std::make_shared<FinCategory>(std::move(o));
}

/// Product category c x d. Object (a,b) has id a*|d|+b; arrow (f,g) likewise.
inline CatPtr product_category(const FinCategory& c, const FinCategory& d) {
  FinCategory p;
  p.object_count = c.object_count * d.object_count;
  const int dn = d.arrow_count();
  p.arrows.reserve(static_cast<size_t>(c.arrow_count()) * dn);
  for (int f = 0; f < c.arrow_count(); ++f)
    for (int g = 0; g < dn; ++g)
      p.arrows.push_back({c.src(f) * d.object_count + d.src(g),
                          c.tgt(f) * d.object_count + d.tgt(g)});
  p.identity.resize(p.object_count);
  for (int a = 0; a < c.object_count; ++a)
    for (int b = 0; b < d.object_count; ++b)
      p.identity[a * d.object_count + b] = c.identity[a] * dn + d.identity[b];
  p.allocate_composition();
  for (int f2 = 0; f2 < c.arrow_count(); ++f2)
    for (int g2 = 0; g2 < dn; ++g2)
      for (int f1 = 0; f1 < c.arrow_count(); ++f1) {
        if (!c.composable(f2, f1)) continue;
        for (int g1 = 0; g1 < dn; ++g1) {
          if (!d.composable(g2, g1)) continue;
          p.set_composite(f2 * dn + g2, f1 * dn + g1,
                          c.compose(f2, f1) * dn + d.compose(g2, g1));
        }
      }
  return std::make_shared<FinCategory>(std::move(p));
}

inline int product_obj(const FinCategory& d, int a, int b) { return a * d.object_count + b; }
inline int product_arr(const FinCategory& d, int f, int g) { return f * d.arrow_count() + g; }

/// Skeletal category of finite sets on sizes 0..max_size, all functions.
/// A function f: m -> n is tabulated by its value list; arrow ids are dense,
/// ordered by (m, n, lexicographic table).
class FinSetCategory {
 public:
  explicit FinSetCategory(int max_size) : max_size_(max_size) {
    CategoryBuilder b;
    for (int m = 0; m <= max_size; ++m) b.add_object(std::to_string(m));
    // enumerate all functions m -> n
    for (int m = 0; m <= max_size; ++m)
      for (int n = 0; n <= max_size; ++n) {
        if (m > 0 && n == 0) continue;  // no functions from nonempty to empty
        std::vector<int> radix(m, n);
        for_each_tuple(radix, [&](const std::vector<int>& t) {
          std::string name = "f" + std::to_string(m) + "to" + std::to_string(n);
          for (int v : t) name += "_" + std::to_string(v);
          int id = b.add_arrow(m, n, name);
          tables_.push_back(t);
          ends_.push_back({m, n});
          index_[{m, n, t}] = id;
          return true;
        });
      }
    for (int m = 0; m <= max_size; ++m) {
      std::vector<int> idt(m);
      std::iota(idt.begin(), idt.end(), 0);
      b.set_identity(m, index_.at({m, m, idt}));
    }
    // composition: (g . f)(i) = g(f(i))
    const int count = static_cast<int>(tables_.size());
    for (int g = 0; g < count; ++g)
      for (int f = 0; f < count; ++f) {
        if (ends_[f].second != ends_[g].first) continue;
        std::vector<int> t(tables_[f].size());
        for (size_t i = 0; i < t.size(); ++i) t[i] = tables_[g][tables_[f][i]];
        b.set_composite(g, f, index_.at({ends_[f].first, ends_[g].second, t}));
      }
    cat_ = b.build();
  }

  CatPtr category() const { return cat_; }
  int max_size() const { return max_size_; }

  /// Arrow id of the tabulated function f: m -> n.
  int arrow_of(int m, int n, const std::vector<int>& table) const {
    auto it = index_.find({m, n, table});
    require(it != index_.end(), "FinSetCategory: no such function");
    return it->second;
  }

  const std::vector<int>& table_of(int arrow) const { return tables_[arrow]; }

 private:
  int max_size_;
  CatPtr cat_;
  std::vector<std::vector<int>> tables_;
  std::vector<std::pair<int, int>> ends_;
  std::map<std::tuple<int, int, std::vector<int>>, int> index_;
};

}  // namespace fincat
