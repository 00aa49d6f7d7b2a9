#pragma once

#include "fincat/linalg.hpp"
#include "fincat/presheaf.hpp"

namespace fincat {

/// Finite measurable space surrogate: labelled points in a fixed order.
struct MeasSpace {
  std::vector<std::string> point;

  int size() const { return static_cast<int>(point.size()); }
  bool operator==(const MeasSpace& o) const { return point == o.point; }
};

inline MeasSpace numbered_space(const std::string& prefix, int n) {
  MeasSpace s;
  for (int i = 0; i < n; ++i) s.point.push_back(prefix + std::to_string(i));
  return s;
}

/// Space with a base map f: X -> I.
struct BasedSpace {
  MeasSpace space;
  MeasSpace base;
  std::vector<int> to_base;  // per point of space: index in base

  bool operator==(const BasedSpace& o) const {
    return space == o.space && base == o.base && to_base == o.to_base;
  }
};

/// Space trivially based over the one-point base.
inline BasedSpace trivially_based(MeasSpace s) {
  BasedSpace b;
  b.space = std::move(s);
  b.base.point = {"*"};
  b.to_base.assign(b.space.size(), 0);
  return b;
}

/// Finitely supported signed rational measure, sparse and sorted by point.
struct AtomicMeasure {
  std::vector<std::pair<int, Rat>> mass;

  Rat at(int point) const {
    for (auto& [p, m] : mass)
      if (p == point) return m;
    return Rat(0);
  }
  Rat total_variation() const {
    Rat t = 0;
    for (auto& [p, m] : mass) t += m < 0 ? Rat(-m) : m;
    return t;
  }
  void add(int point, const Rat& m) {
    for (auto& [p, v] : mass)
      if (p == point) {
        v += m;
        return;
      }
    mass.push_back({point, m});
  }
  void normalize() {
    std::sort(mass.begin(), mass.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    mass.erase(std::remove_if(mass.begin(), mass.end(),
                              [](const auto& pm) { return pm.second == 0; }),
               mass.end());
  }
  bool operator==(const AtomicMeasure& o) const { return mass == o.mass; }
};

inline AtomicMeasure dirac_measure(int point) {
  AtomicMeasure m;
  m.mass = {{point, Rat(1)}};
  return m;
}

/// Kernel: a bundle map over a base arrow. Each source point carries an
/// atomic measure on the target space, supported on the fibered product
/// determined by the base data.
struct Kernel {
  BasedSpace src;
  BasedSpace dst;
  std::vector<int> base_arrow;     // src.base -> dst.base
  std::vector<AtomicMeasure> row;  // per source point

  Rat sup_norm() const {
    Rat n = 0;
    for (auto& r : row) {
      Rat t = r.total_variation();
      if (t > n) n = t;
    }
    return n;
  }
};

/// Support condition: k(x1)(x2) != 0 implies phi(f1(x1)) = f2(x2).
inline LawReport check_kernel(const Kernel& k) {
  LawReport rep;
  if (static_cast<int>(k.row.size()) != k.src.space.size()) {
    rep.add("shape", "row count does not match the source space");
    return rep;
  }
  if (static_cast<int>(k.base_arrow.size()) != k.src.base.size()) {
    rep.add("shape", "base arrow does not match the source base");
    return rep;
  }
  for (int i : k.base_arrow)
    if (i < 0 || i >= k.dst.base.size()) {
      rep.add("shape", "base arrow out of range");
      return rep;
    }
  for (int x1 = 0; x1 < k.src.space.size(); ++x1)
    for (auto& [x2, m] : k.row[x1].mass) {
      if (x2 < 0 || x2 >= k.dst.space.size()) {
        rep.add("shape", "mass outside the target space at " + k.src.space.point[x1]);
        return rep;
      }
      if (m != 0 && k.base_arrow[k.src.to_base[x1]] != k.dst.to_base[x2])
        rep.add("support", "mass at (" + k.src.space.point[x1] + ", " +
                               k.dst.space.point[x2] + ") leaves the fibered product");
    }
  return rep;
}

/// Positivity and row-normalization check for stochastic use.
inline LawReport check_stochastic(const Kernel& k) {
  LawReport rep;
  for (int x = 0; x < k.src.space.size(); ++x) {
    Rat total = 0;
    for (auto& [p, m] : k.row[x].mass) {
      if (m < 0) rep.add("positivity", "negative mass at " + k.src.space.point[x]);
      total += m;
    }
    if (total != 1) rep.add("normalization", "row at " + k.src.space.point[x]);
  }
  return rep;
}

/// The Dirac kernel on a based space, over the identity of the base.
inline Kernel dirac(const BasedSpace& x) {
  Kernel k;
  k.src = x;
  k.dst = x;
  k.base_arrow.resize(x.base.size());
  std::iota(k.base_arrow.begin(), k.base_arrow.end(), 0);
  for (int p = 0; p < x.space.size(); ++p) k.row.push_back(dirac_measure(p));
  return k;
}

/// Composition: (k2 . k)(x1)(x3) = sum over x2 of k(x1)(x2) * k2(x2)(x3).
inline Kernel compose(const Kernel& k, const Kernel& k2) {
  require(k.dst == k2.src, "compose: middle space mismatch");
  Kernel r;
  r.src = k.src;
  r.dst = k2.dst;
  r.base_arrow.resize(k.base_arrow.size());
  for (size_t i = 0; i < k.base_arrow.size(); ++i)
    r.base_arrow[i] = k2.base_arrow[k.base_arrow[i]];
  r.row.resize(k.src.space.size());
  for (int x1 = 0; x1 < k.src.space.size(); ++x1) {
    AtomicMeasure& out = r.row[x1];
    for (auto& [x2, m] : k.row[x1].mass)
      for (auto& [x3, m2] : k2.row[x2].mass) out.add(x3, m * m2);
    out.normalize();
  }
  return r;
}

inline bool kernel_equal(const Kernel& a, const Kernel& b) {
  if (!(a.src == b.src) || !(a.dst == b.dst) || a.base_arrow != b.base_arrow)
    return false;
  for (size_t x = 0; x < a.row.size(); ++x) {
    AtomicMeasure ma = a.row[x], mb = b.row[x];
    ma.normalize();
    mb.normalize();
    if (!(ma == mb)) return false;
  }
  return true;
}

/// Pushforward of a point map h: X -> Y over a commuting base square:
/// rows are Dirac masses at h(x).
inline Kernel pushforward(const BasedSpace& x, const BasedSpace& y,
                          const std::vector<int>& h, const std::vector<int>& phi) {
  require(static_cast<int>(h.size()) == x.space.size(), "pushforward: bad point map");
  require(static_cast<int>(phi.size()) == x.base.size(), "pushforward: bad base map");
  for (int p = 0; p < x.space.size(); ++p)
    require(y.to_base[h[p]] == phi[x.to_base[p]],
            "pushforward: the base square does not commute");
  Kernel k;
  k.src = x;
  k.dst = y;
  k.base_arrow = phi;
  for (int p = 0; p < x.space.size(); ++p) k.row.push_back(dirac_measure(h[p]));
  return k;
}

/// Fibered product X x_I J for g: X -> I (the based space x over I) and
/// phi: J -> I; points are pairs (x, j) with g(x) = phi(j), ordered
/// lexicographically, based over J by the second projection.
struct FiberedProduct {
  BasedSpace total;            // over J
  std::vector<int> proj_x;     // to points of X
  std::vector<int> proj_j;     // to points of J (also the base map)
  std::map<std::pair<int, int>, int> index;
};

inline FiberedProduct fibered_product(const BasedSpace& x, const MeasSpace& j_base,
                                      const std::vector<int>& phi) {
  FiberedProduct r;
  r.total.base = j_base;
  for (int p = 0; p < x.space.size(); ++p)
    for (int j = 0; j < j_base.size(); ++j) {
      if (x.to_base[p] != phi[j]) continue;
      r.index[{p, j}] = static_cast<int>(r.total.space.point.size());
      r.total.space.point.push_back("(" + x.space.point[p] + "," + j_base.point[j] + ")");
      r.proj_x.push_back(p);
      r.proj_j.push_back(j);
      r.total.to_base.push_back(j);
    }
  return r;
}

/// Cartesian lift: for k: Z -> M X over phi: J -> I with Z based over J, the
/// unique kernel Z -> M(X x_I J) over id_J through which k factors via the
/// pushforward of the projection. Mass sits at (x, f(z)).
struct CartesianLift {
  FiberedProduct product;
  Kernel lift;        // Z -> M(X x_I J) over id_J
  Kernel projection;  // pushforward of p_X over phi
};

inline CartesianLift cartesian_lift(const Kernel& k, const std::vector<int>& phi) {
  // k.src is based over J; k.dst over I; phi: J -> I must match the kernel
  require(static_cast<int>(phi.size()) == k.src.base.size(),
          "cartesian_lift: phi does not match the source base");
  require(phi == k.base_arrow, "cartesian_lift: phi is not the kernel base arrow");
  CartesianLift r;
  r.product = fibered_product(k.dst, k.src.base, phi);
  r.lift.src = k.src;
  r.lift.dst = r.product.total;
  r.lift.base_arrow.resize(k.src.base.size());
  std::iota(r.lift.base_arrow.begin(), r.lift.base_arrow.end(), 0);
  r.lift.row.resize(k.src.space.size());
  for (int z = 0; z < k.src.space.size(); ++z) {
    int fz = k.src.to_base[z];
    for (auto& [x, m] : k.row[z].mass) {
      auto it = r.product.index.find({x, fz});
      require(it != r.product.index.end(),
              "cartesian_lift: support condition violated in the input");
      r.lift.row[z].add(it->second, m);
    }
    r.lift.row[z].normalize();
  }
  r.projection = pushforward(r.product.total, k.dst, r.product.proj_x, phi);
  return r;
}

/// Product of based spaces, pairs ordered lexicographically.
inline BasedSpace product_based(const BasedSpace& a, const BasedSpace& b) {
  BasedSpace r;
  for (int i = 0; i < a.space.size(); ++i)
    for (int j = 0; j < b.space.size(); ++j) {
      r.space.point.push_back("(" + a.space.point[i] + "," + b.space.point[j] + ")");
      r.to_base.push_back(a.to_base[i] * b.base.size() + b.to_base[j]);
    }
  for (int i = 0; i < a.base.size(); ++i)
    for (int j = 0; j < b.base.size(); ++j)
      r.base.point.push_back("(" + a.base.point[i] + "," + b.base.point[j] + ")");
  return r;
}

/// Tensor of kernels by product measures, over the product base arrow.
inline Kernel tensor_kernels(const Kernel& k1, const Kernel& k2) {
  Kernel r;
  r.src = product_based(k1.src, k2.src);
  r.dst = product_based(k1.dst, k2.dst);
  r.base_arrow.resize(k1.src.base.size() * k2.src.base.size());
  for (int i = 0; i < k1.src.base.size(); ++i)
    for (int j = 0; j < k2.src.base.size(); ++j)
      r.base_arrow[i * k2.src.base.size() + j] =
          k1.base_arrow[i] * k2.dst.base.size() + k2.base_arrow[j];
  r.row.resize(r.src.space.size());
  const int n2 = k2.src.space.size();
  const int m2 = k2.dst.space.size();
  for (int x1 = 0; x1 < k1.src.space.size(); ++x1)
    for (int x2 = 0; x2 < n2; ++x2) {
      AtomicMeasure& out = r.row[x1 * n2 + x2];
      for (auto& [y1, a] : k1.row[x1].mass)
        for (auto& [y2, b] : k2.row[x2].mass) out.add(y1 * m2 + y2, a * b);
      out.normalize();
    }
  return r;
}

/// Concreteness of a presheaf: the canonical map P(X) -> P(unit)^{hom(unit,X)}
/// is injective at every object. Returns a witness pair when it is not.
struct ConcretenessReport {
  bool concrete = true;
  int object = -1;
  int witness_x = -1, witness_y = -1;
};

inline ConcretenessReport is_concrete(const Presheaf& p, int unit_object) {
  ConcretenessReport r;
  const FinCategory& c = *p.cat;
  for (int X = 0; X < c.object_count; ++X) {
    auto points = c.hom(unit_object, X);
    std::map<std::vector<int>, int> seen;
    for (int s = 0; s < p.size[X]; ++s) {
      std::vector<int> evals;
      evals.reserve(points.size());
      for (int pt : points) evals.push_back(p.act(pt, s));
      auto [it, fresh] = seen.emplace(std::move(evals), s);
      if (!fresh) {
        r.concrete = false;
        r.object = X;
        r.witness_x = it->second;
        r.witness_y = s;
        return r;
      }
    }
  }
  return r;
}

}  // namespace fincat
