#pragma once

#include <map>

#include "fincat/category.hpp"
#include "fincat/linalg.hpp"

namespace fincat {

/// Finite family of based vector spaces over the points of a finite base set.
template <class F>
struct LinearBundle {
  int base_size = 0;
  std::vector<int> dim;  // fiber dimension per point
};

/// Bundle map over the identity of the base: one matrix per point, with
/// shape target_dim x source_dim.
template <class F>
struct BundleMap {
  std::vector<Matrix<F>> at;
};

template <class F>
LawReport check_bundle_map(const LinearBundle<F>& src, const LinearBundle<F>& dst,
                           const BundleMap<F>& m) {
  LawReport rep;
  if (src.base_size != dst.base_size ||
      static_cast<int>(m.at.size()) != src.base_size) {
    rep.add("shape", "bundle map length mismatch");
    return rep;
  }
  for (int p = 0; p < src.base_size; ++p)
    if (m.at[p].rows != dst.dim[p] || m.at[p].cols != src.dim[p])
      rep.add("shape", "matrix at point " + std::to_string(p));
  return rep;
}

template <class F>
BundleMap<F> identity_bundle_map(const LinearBundle<F>& v, const F& f) {
  BundleMap<F> m;
  for (int p = 0; p < v.base_size; ++p) m.at.push_back(Matrix<F>::identity(v.dim[p], f));
  return m;
}

template <class F>
BundleMap<F> compose_bundle_maps(const BundleMap<F>& g, const BundleMap<F>& h, const F& f) {
  BundleMap<F> m;
  for (size_t p = 0; p < g.at.size(); ++p) m.at.push_back(matmul(g.at[p], h.at[p], f));
  return m;
}

template <class F>
bool bundle_map_is_iso(const BundleMap<F>& m, const F& f) {
  for (auto& mat : m.at) {
    if (mat.rows != mat.cols) return false;
    if (rank(mat, f) != mat.rows) return false;
  }
  return true;
}

/// Pullback along phi: P' -> P: fiber at p' is the fiber at phi(p').
template <class F>
LinearBundle<F> pullback_bundle(const std::vector<int>& phi, const LinearBundle<F>& v) {
  LinearBundle<F> r;
  r.base_size = static_cast<int>(phi.size());
  for (int p : phi) {
    require(p >= 0 && p < v.base_size, "pullback_bundle: base map out of range");
    r.dim.push_back(v.dim[p]);
  }
  return r;
}

template <class F>
BundleMap<F> pullback_bundle_map(const std::vector<int>& phi, const BundleMap<F>& m) {
  BundleMap<F> r;
  for (int p : phi) r.at.push_back(m.at[p]);
  return r;
}

/// Direct sum over preimages, with its canonical injections. Summands are
/// ordered by increasing source point.
template <class F>
struct SigmaBundle {
  LinearBundle<F> bundle;            // over the codomain
  std::vector<int> offset;           // per source point: offset inside its block
  std::vector<std::vector<int>> preimage;  // per target point
};

template <class F>
SigmaBundle<F> sigma_bundle(const std::vector<int>& phi, int target_size,
                            const LinearBundle<F>& v) {
  require(static_cast<int>(phi.size()) == v.base_size, "sigma_bundle: base mismatch");
  SigmaBundle<F> r;
  r.bundle.base_size = target_size;
  r.bundle.dim.assign(target_size, 0);
  r.offset.assign(v.base_size, 0);
  r.preimage.assign(target_size, {});
  for (int p = 0; p < v.base_size; ++p) {
    int q = phi[p];
    require(q >= 0 && q < target_size, "sigma_bundle: base map out of range");
    r.offset[p] = r.bundle.dim[q];
    r.bundle.dim[q] += v.dim[p];
    r.preimage[q].push_back(p);
  }
  return r;
}

/// Product over preimages; at finite scale the underlying bundle coincides
/// with the direct sum, with projections distinguished instead of injections.
template <class F>
using PiBundle = SigmaBundle<F>;

template <class F>
PiBundle<F> pi_bundle(const std::vector<int>& phi, int target_size,
                      const LinearBundle<F>& v) {
  return sigma_bundle(phi, target_size, v);
}

// ---------------------------------------------------------------------------
// Adjunction data. sigma_phi -| phi^* -| pi_phi, with unit/counit as exact
// block matrices.

/// Unit of sigma -| pullback: V -> phi^*(sigma_phi V), blockwise injection.
template <class F>
BundleMap<F> sigma_unit(const std::vector<int>& phi, const LinearBundle<F>& v,
                        const SigmaBundle<F>& s, const F& f) {
  BundleMap<F> m;
  for (int p = 0; p < v.base_size; ++p) {
    Matrix<F> inj(s.bundle.dim[phi[p]], v.dim[p], f);
    for (int i = 0; i < v.dim[p]; ++i) inj.at(s.offset[p] + i, i) = f.one();
    m.at.push_back(std::move(inj));
  }
  return m;
}

/// Counit of sigma -| pullback: sigma_phi(phi^* W) -> W, blockwise codiagonal.
template <class F>
BundleMap<F> sigma_counit(const std::vector<int>& phi, const LinearBundle<F>& w,
                          const SigmaBundle<F>& s_of_pullback, const F& f) {
  BundleMap<F> m;
  for (int q = 0; q < w.base_size; ++q) {
    Matrix<F> co(w.dim[q], s_of_pullback.bundle.dim[q], f);
    for (int p : s_of_pullback.preimage[q])
      for (int i = 0; i < w.dim[q]; ++i)
        co.at(i, s_of_pullback.offset[p] + i) = f.one();
    m.at.push_back(std::move(co));
  }
  return m;
}

/// Unit of pullback -| pi: W -> pi_phi(phi^* W), blockwise diagonal.
template <class F>
BundleMap<F> pi_unit(const std::vector<int>& phi, const LinearBundle<F>& w,
                     const PiBundle<F>& p_of_pullback, const F& f) {
  BundleMap<F> m;
  for (int q = 0; q < w.base_size; ++q) {
    Matrix<F> diag(p_of_pullback.bundle.dim[q], w.dim[q], f);
    for (int p : p_of_pullback.preimage[q])
      for (int i = 0; i < w.dim[q]; ++i)
        diag.at(p_of_pullback.offset[p] + i, i) = f.one();
    m.at.push_back(std::move(diag));
  }
  return m;
}

/// Counit of pullback -| pi: phi^*(pi_phi V) -> V, blockwise projection.
template <class F>
BundleMap<F> pi_counit(const std::vector<int>& phi, const LinearBundle<F>& v,
                       const PiBundle<F>& pi, const F& f) {
  BundleMap<F> m;
  for (int p = 0; p < v.base_size; ++p) {
    Matrix<F> proj(v.dim[p], pi.bundle.dim[phi[p]], f);
    for (int i = 0; i < v.dim[p]; ++i) proj.at(i, pi.offset[p] + i) = f.one();
    m.at.push_back(std::move(proj));
  }
  return m;
}

/// Pushforward of a bundle map along sigma: blockwise on summands.
template <class F>
BundleMap<F> sigma_map(const std::vector<int>& phi, const SigmaBundle<F>& sv,
                       const SigmaBundle<F>& sw, const BundleMap<F>& m, const F& f) {
  BundleMap<F> r;
  for (int q = 0; q < sv.bundle.base_size; ++q) {
    Matrix<F> block(sw.bundle.dim[q], sv.bundle.dim[q], f);
    for (int p : sv.preimage[q])
      for (int i = 0; i < m.at[p].rows; ++i)
        for (int j = 0; j < m.at[p].cols; ++j)
          block.at(sw.offset[p] + i, sv.offset[p] + j) = m.at[p].at(i, j);
    r.at.push_back(std::move(block));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Beck-Chevalley comparison.

/// Commuting square of finite sets: top: W -> X, left: W -> Y, right: X -> Z,
/// bottom: Y -> Z with right . top = bottom . left.
struct BaseSquare {
  int w = 0, x = 0, y = 0, z = 0;
  std::vector<int> top;     // W -> X
  std::vector<int> left;    // W -> Y
  std::vector<int> right;   // X -> Z
  std::vector<int> bottom;  // Y -> Z
};

inline bool square_commutes(const BaseSquare& s) {
  for (int i = 0; i < s.w; ++i)
    if (s.right[s.top[i]] != s.bottom[s.left[i]]) return false;
  return true;
}

inline bool square_is_pullback(const BaseSquare& s) {
  // W -> X x_Z Y must be a bijection
  std::map<std::pair<int, int>, int> hits;
  for (int i = 0; i < s.w; ++i)
    if (++hits[{s.top[i], s.left[i]}] > 1) return false;
  int count = 0;
  for (int a = 0; a < s.x; ++a)
    for (int b = 0; b < s.y; ++b)
      if (s.right[a] == s.bottom[b]) {
        ++count;
        if (!hits.count({a, b})) return false;
      }
  return count == s.w;
}

/// The canonical comparison top_!(left^* v) -> right^*(bottom_! v) for a
/// bundle v over Y, built from the unit and counit composites. Returns the
/// two sides and the comparison; `iso` reports pointwise invertibility with
/// the first failing point when not.
template <class F>
struct BeckChevalleyResult {
  LinearBundle<F> lhs, rhs;
  BundleMap<F> comparison;
  bool iso = false;
  int failing_point = -1;
};

template <class F>
BeckChevalleyResult<F> check_beck_chevalley(const BaseSquare& s, const LinearBundle<F>& v,
                                            const F& f) {
  require(square_commutes(s), "check_beck_chevalley: square does not commute");
  require(v.base_size == s.y, "check_beck_chevalley: bundle not over Y");
  BeckChevalleyResult<F> r;
  auto lv = pullback_bundle(s.left, v);           // over W
  auto sig_top = sigma_bundle(s.top, s.x, lv);    // lhs over X
  auto sig_bot = sigma_bundle(s.bottom, s.z, v);  // over Z
  r.lhs = sig_top.bundle;
  r.rhs = pullback_bundle(s.right, sig_bot.bundle);  // over X

  // comparison at point a of X: each summand w in top^{-1}(a) contributes
  // its fiber v_{left(w)} into the summand left(w) of (bottom_! v)_{right(a)};
  // this is the composite of sigma_top(unit of bottom pulled back) with the
  // counit of top, written directly as a block matrix
  r.iso = true;
  for (int a = 0; a < s.x; ++a) {
    Matrix<F> cmp(r.rhs.dim[a], r.lhs.dim[a], f);
    for (int w : sig_top.preimage[a]) {
      int yq = s.left[w];
      for (int i = 0; i < v.dim[yq]; ++i)
        cmp.at(sig_bot.offset[yq] + i, sig_top.offset[w] + i) = f.one();
    }
    if (cmp.rows != cmp.cols || rank(cmp, f) != cmp.rows) {
      if (r.iso) r.failing_point = a;
      r.iso = false;
    }
    r.comparison.at.push_back(std::move(cmp));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Projection formula.

template <class F>
LinearBundle<F> tensor_bundle(const LinearBundle<F>& a, const LinearBundle<F>& b) {
  require(a.base_size == b.base_size, "tensor_bundle: base mismatch");
  LinearBundle<F> r;
  r.base_size = a.base_size;
  for (int p = 0; p < a.base_size; ++p) r.dim.push_back(a.dim[p] * b.dim[p]);
  return r;
}

template <class F>
struct ProjectionFormulaResult {
  LinearBundle<F> lhs, rhs;  // over the codomain of phi
  BundleMap<F> comparison;
  bool iso = false;
};

/// sigma_phi(phi^* t' (x) t) -> t' (x) sigma_phi t: the summand for p maps by
/// id (x) iota_p. Basis pairing is (i, j) -> i * dim_second + j.
template <class F>
ProjectionFormulaResult<F> check_projection_formula(const std::vector<int>& phi,
                                                    int target_size,
                                                    const LinearBundle<F>& t_over_q,
                                                    const LinearBundle<F>& t_over_p,
                                                    const F& f) {
  require(static_cast<int>(phi.size()) == t_over_p.base_size,
          "check_projection_formula: base mismatch");
  require(t_over_q.base_size == target_size, "check_projection_formula: target mismatch");
  ProjectionFormulaResult<F> r;
  auto pulled = pullback_bundle(phi, t_over_q);
  auto inner = tensor_bundle(pulled, t_over_p);
  auto sig_inner = sigma_bundle(phi, target_size, inner);
  auto sig_t = sigma_bundle(phi, target_size, t_over_p);
  r.lhs = sig_inner.bundle;
  r.rhs = tensor_bundle(t_over_q, sig_t.bundle);
  r.iso = true;
  for (int q = 0; q < target_size; ++q) {
    Matrix<F> cmp(r.rhs.dim[q], r.lhs.dim[q], f);
    int dq = t_over_q.dim[q];
    int dsum = sig_t.bundle.dim[q];
    for (int p : sig_inner.preimage[q]) {
      int dp = t_over_p.dim[p];
      // basis (i, j) of T'_q (x) T_p -> (i, offset_p + j) of T'_q (x) (sum T)
      for (int i = 0; i < dq; ++i)
        for (int j = 0; j < dp; ++j)
          cmp.at(i * dsum + sig_t.offset[p] + j, sig_inner.offset[p] + i * dp + j) =
              f.one();
    }
    if (cmp.rows != cmp.cols || rank(cmp, f) != cmp.rows) r.iso = false;
    r.comparison.at.push_back(std::move(cmp));
  }
  return r;
}

/// Tensor of bundle maps, pointwise Kronecker.
template <class F>
BundleMap<F> tensor_bundle_maps(const BundleMap<F>& a, const BundleMap<F>& b, const F& f) {
  BundleMap<F> r;
  for (size_t p = 0; p < a.at.size(); ++p) r.at.push_back(kron(a.at[p], b.at[p], f));
  return r;
}

}  // namespace fincat
