#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>

#include "fincat/util.hpp"

namespace fincat {

using Rat = boost::multiprecision::cpp_rational;

/// Exact rational field.
struct RatField {
  using Elem = Rat;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem div(const Elem& a, const Elem& b) const { return a / b; }
  Elem neg(const Elem& a) const { return -a; }
  bool is_zero(const Elem& a) const { return a == 0; }
  std::string str(const Elem& a) const { return a.str(); }
};

/// Prime field F_p with a runtime modulus.
struct PrimeField {
  long long p = 2;
  using Elem = long long;
  Elem zero() const { return 0; }
  Elem one() const { return 1 % p; }
  Elem add(Elem a, Elem b) const { return (a + b) % p; }
  Elem sub(Elem a, Elem b) const { return ((a - b) % p + p) % p; }
  Elem mul(Elem a, Elem b) const { return a * b % p; }
  Elem neg(Elem a) const { return (p - a % p) % p; }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem inv(Elem a) const {
    require(a % p != 0, "PrimeField: division by zero");
    Elem r = 1, base = a % p;
    for (long long e = p - 2; e > 0; e >>= 1) {
      if (e & 1) r = r * base % p;
      base = base * base % p;
    }
    return r;
  }
  bool is_zero(Elem a) const { return a % p == 0; }
  std::string str(Elem a) const { return std::to_string(a % p); }
};

/// Dense matrix over a field, row-major.
template <class F>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<typename F::Elem> data;

  Matrix() = default;
  Matrix(int r, int c, const F& f) : rows(r), cols(c), data(r * c, f.zero()) {}

  typename F::Elem& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  const typename F::Elem& at(int i, int j) const {
    return data[static_cast<size_t>(i) * cols + j];
  }

  static Matrix identity(int n, const F& f) {
    Matrix m(n, n, f);
    for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

template <class F>
Matrix<F> matmul(const Matrix<F>& a, const Matrix<F>& b, const F& f) {
  require(a.cols == b.rows, "matmul: shape mismatch");
  Matrix<F> c(a.rows, b.cols, f);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (f.is_zero(a.at(i, k))) continue;
      for (int j = 0; j < b.cols; ++j)
        c.at(i, j) = f.add(c.at(i, j), f.mul(a.at(i, k), b.at(k, j)));
    }
  return c;
}

template <class F>
Matrix<F> matadd(const Matrix<F>& a, const Matrix<F>& b, const F& f) {
  require(a.rows == b.rows && a.cols == b.cols, "matadd: shape mismatch");
  Matrix<F> c = a;
  for (size_t i = 0; i < c.data.size(); ++i) c.data[i] = f.add(c.data[i], b.data[i]);
  return c;
}

template <class F>
int rank(Matrix<F> m, const F& f) {
  int r = 0;
  for (int col = 0; col < m.cols && r < m.rows; ++col) {
    int pivot = -1;
    for (int i = r; i < m.rows; ++i)
      if (!f.is_zero(m.at(i, col))) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(pivot, j));
    auto inv = f.div(f.one(), m.at(r, col));
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = f.mul(m.at(r, j), inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || f.is_zero(m.at(i, col))) continue;
      auto factor = m.at(i, col);
      for (int j = 0; j < m.cols; ++j)
        m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
    }
    ++r;
  }
  return r;
}

/// Inverse by Gauss-Jordan; nullopt when singular.
template <class F>
std::optional<Matrix<F>> inverse(Matrix<F> m, const F& f) {
  require(m.rows == m.cols, "inverse: not square");
  int n = m.rows;
  Matrix<F> inv = Matrix<F>::identity(n, f);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i)
      if (!f.is_zero(m.at(i, col))) {
        pivot = i;
        break;
      }
    if (pivot < 0) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      std::swap(m.at(col, j), m.at(pivot, j));
      std::swap(inv.at(col, j), inv.at(pivot, j));
    }
    auto d = f.div(f.one(), m.at(col, col));
    for (int j = 0; j < n; ++j) {
      m.at(col, j) = f.mul(m.at(col, j), d);
      inv.at(col, j) = f.mul(inv.at(col, j), d);
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || f.is_zero(m.at(i, col))) continue;
      auto factor = m.at(i, col);
      for (int j = 0; j < n; ++j) {
        m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(col, j)));
        inv.at(i, j) = f.sub(inv.at(i, j), f.mul(factor, inv.at(col, j)));
      }
    }
  }
  return inv;
}

/// Kronecker product with the pairing (i, i') -> i * rows(b) + i'.
template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b, const F& f) {
  Matrix<F> c(a.rows * b.rows, a.cols * b.cols, f);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      if (f.is_zero(a.at(i, j))) continue;
      for (int k = 0; k < b.rows; ++k)
        for (int l = 0; l < b.cols; ++l)
          c.at(i * b.rows + k, j * b.cols + l) = f.mul(a.at(i, j), b.at(k, l));
    }
  return c;
}

}  // namespace fincat
