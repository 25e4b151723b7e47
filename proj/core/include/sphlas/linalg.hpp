#pragma once

#include "sphlas/scalars.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sphlas {

template <class T>
struct Matrix {
  size_t rows = 0, cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, T(0)) {}
  Matrix(size_t r, size_t c, const T& fill) : rows(r), cols(c), data(r * c, fill) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  T& operator()(size_t i, size_t j) { return data[i * cols + j]; }
  const T& operator()(size_t i, size_t j) const { return data[i * cols + j]; }

  Matrix transpose() const {
    Matrix m(cols, rows);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = r.data[i] + b.data[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = r.data[i] - b.data[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i)
      for (size_t k = 0; k < a.cols; ++k) {
        const T& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (size_t j = 0; j < b.cols; ++j) r(i, j) = r(i, j) + aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const Matrix& a, const T& s) {
    Matrix r = a;
    for (auto& x : r.data) x = x * s;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> r(rows, T(0));
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j)
        if (!is_zero((*this)(i, j))) r[i] = r[i] + (*this)(i, j) * v[j];
    return r;
  }

  bool is_symmetric() const {
    if (rows != cols) return false;
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = i + 1; j < cols; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }
};

// Row reduction to reduced echelon form over an exact field. Returns rank;
// pivot_cols (if given) receives the pivot column of each pivot row.
template <class T>
size_t rref(Matrix<T>& m, std::vector<size_t>* pivot_cols = nullptr) {
  size_t rank = 0;
  if (pivot_cols) pivot_cols->clear();
  for (size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    size_t piv = rank;
    while (piv < m.rows && is_zero(m(piv, col))) ++piv;
    if (piv == m.rows) continue;
    if (piv != rank)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
    T inv = T(1) / m(rank, col);
    for (size_t j = col; j < m.cols; ++j) m(rank, j) = m(rank, j) * inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == rank || is_zero(m(i, col))) continue;
      T f = m(i, col);
      for (size_t j = col; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(rank, j);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++rank;
  }
  return rank;
}

// Basis of the right nullspace {x : Mx = 0}, deterministic: free columns in
// increasing order, each basis vector has a 1 in its free coordinate.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m) {
  std::vector<size_t> piv;
  rref(m, &piv);
  std::vector<bool> is_piv(m.cols, false);
  for (size_t c : piv) is_piv[c] = true;
  std::vector<std::vector<T>> basis;
  for (size_t free = 0; free < m.cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<T> v(m.cols, T(0));
    v[free] = T(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
std::optional<std::vector<T>> solve_linear(Matrix<T> a, std::vector<T> b) {
  size_t n = a.rows, c = a.cols;
  Matrix<T> aug(n, c + 1);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < c; ++j) aug(i, j) = a(i, j);
    aug(i, c) = b[i];
  }
  std::vector<size_t> piv;
  rref(aug, &piv);
  std::vector<T> x(c, T(0));
  for (size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == c) return std::nullopt;  // inconsistent row 0 ... 0 | 1
    x[piv[r]] = aug(r, c);
  }
  return x;
}

template <class T>
T determinant(Matrix<T> a) {
  if (a.rows != a.cols) throw std::invalid_argument("determinant of non-square matrix");
  size_t n = a.rows;
  T det(1);
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    while (p < n && is_zero(a(p, k))) ++p;
    if (p == n) return T(0);
    if (p != k) {
      for (size_t j = k; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det = det * a(k, k);
    T inv = T(1) / a(k, k);
    for (size_t i = k + 1; i < n; ++i) {
      if (is_zero(a(i, k))) continue;
      T f = a(i, k) * inv;
      for (size_t j = k; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
    }
  }
  return det;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  size_t n = a.rows;
  Matrix<T> aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  if (rref(aug) != n) return std::nullopt;
  Matrix<T> inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// LU with partial pivoting over an exact field, for repeated right-hand sides.
template <class T>
struct LuFactor {
  Matrix<T> lu;
  std::vector<size_t> perm;
  bool singular = false;

  explicit LuFactor(Matrix<T> a) : lu(std::move(a)) {
    size_t n = lu.rows;
    perm.resize(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t k = 0; k < n; ++k) {
      size_t p = k;
      while (p < n && is_zero(lu(p, k))) ++p;
      if (p == n) { singular = true; return; }
      if (p != k) {
        for (size_t j = 0; j < n; ++j) std::swap(lu(p, j), lu(k, j));
        std::swap(perm[p], perm[k]);
      }
      T inv = T(1) / lu(k, k);
      for (size_t i = k + 1; i < n; ++i) {
        if (is_zero(lu(i, k))) continue;
        T f = lu(i, k) * inv;
        lu(i, k) = f;
        for (size_t j = k + 1; j < n; ++j) lu(i, j) = lu(i, j) - f * lu(k, j);
      }
    }
  }

  std::vector<T> solve(const std::vector<T>& b) const {
    size_t n = lu.rows;
    std::vector<T> y(n);
    for (size_t i = 0; i < n; ++i) {
      y[i] = b[perm[i]];
      for (size_t j = 0; j < i; ++j)
        if (!is_zero(lu(i, j))) y[i] = y[i] - lu(i, j) * y[j];
    }
    for (size_t i = n; i-- > 0;) {
      for (size_t j = i + 1; j < n; ++j)
        if (!is_zero(lu(i, j))) y[i] = y[i] - lu(i, j) * y[j];
      y[i] = y[i] / lu(i, i);
    }
    return y;
  }
};

// Exact positive-semidefiniteness decision for a symmetric rational matrix by
// LDL^T with symmetric diagonal pivoting. On failure a witness vector v with
// v^T A v < 0 is produced.
struct PsdReport {
  bool is_psd = false;
  size_t rank = 0;
  std::vector<Rat> pivots;            // the positive pivots, in pivot order
  std::vector<Rat> witness;           // nonempty iff !is_psd
  Rat witness_value;                  // witness^T A witness (negative)
};

PsdReport psd_check(Matrix<Rat> a);

// Characteristic polynomial coefficients of det(x I - A) by Faddeev-LeVerrier,
// ascending in x. Exact; used as an independent spectral oracle in tests.
std::vector<Rat> charpoly(const Matrix<Rat>& a);

// Floating Cholesky: returns false if a (numerically) fails to be positive
// definite. On success lower-triangular factor is written into l.
bool cholesky(const Matrix<MpFloat>& a, Matrix<MpFloat>& l);

std::vector<MpFloat> cholesky_solve(const Matrix<MpFloat>& l, const std::vector<MpFloat>& b);

}  // namespace sphlas
