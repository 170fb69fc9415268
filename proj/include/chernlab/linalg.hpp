#pragma once

// Small dense square matrices over cplx or Jet. Dimensions here are at most a
// few dozen, so everything is plain Gaussian elimination with partial pivoting
// on the magnitude of the value part.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "chernlab/constants.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/jet.hpp"

namespace chernlab {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {}

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int size() const noexcept { return n_; }
  T& operator()(int i, int j) { return a_[index(i, j)]; }
  const T& operator()(int i, int j) const { return a_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<T> a_;
};

using CMatrix = Matrix<cplx>;

inline cplx reciprocal_of(const cplx& x) { return cplx(1.0) / x; }
inline Jet reciprocal_of(const Jet& x) { return reciprocal(x); }
inline bool is_constant(const cplx&) { return true; }
inline bool is_constant(const Jet&) { return false; }

/// Inverse by Gauss-Jordan elimination. Throws SingularMetric on a vanishing pivot.
template <class T>
Matrix<T> inverse(Matrix<T> a) {
  const int n = a.size();
  Matrix<T> inv = Matrix<T>::identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(value_of(a(c, c)));
    for (int r = c + 1; r < n; ++r) {
      const double m = std::abs(value_of(a(r, c)));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) throw SingularMetric("singular matrix in inverse");
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(c, j), a(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
    }
    const T rp = reciprocal_of(a(c, c));
    for (int j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * rp;
      inv(c, j) = inv(c, j) * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const T f = a(r, c);
      if (value_of(f) == cplx(0.0) && is_constant(f)) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Determinant by elimination; exact zero for singular input.
template <class T>
T determinant(Matrix<T> a) {
  const int n = a.size();
  T det(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(value_of(a(c, c)));
    for (int r = c + 1; r < n; ++r) {
      const double m = std::abs(value_of(a(r, c)));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best == 0.0) return T(0.0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det = det * a(c, c);
    const T rp = reciprocal_of(a(c, c));
    for (int r = c + 1; r < n; ++r) {
      const T f = a(r, c) * rp;
      for (int j = c; j < n; ++j) a(r, j) = a(r, j) - f * a(c, j);
    }
  }
  return det;
}

/// Conjugate transpose.
template <class T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> r(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) r(i, j) = conj(a(j, i));
  return r;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  const int n = a.size();
  Matrix<T> r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) r(i, j) = r(i, j) + a(i, k) * b(k, j);
  return r;
}

inline double frobenius_norm(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

inline double max_hermitian_defect(const CMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

/// Result of a pivoted Cholesky factorization H = P^T L L^H P of a Hermitian matrix.
struct PivotedCholesky {
  CMatrix lower;          // L, in pivoted order
  std::vector<int> perm;  // perm[k] = original index of the k-th pivot
  double min_pivot = 0.0;
};

/// Pivoted Cholesky (largest remaining diagonal first). Throws SingularMetric
/// when a pivot falls below `tol`: the matrix is not positive definite, and the
/// caller gets a diagnostic instead of a regularized answer.
PivotedCholesky pivoted_cholesky(const CMatrix& h, double tol = constants::kTolPositiveDefinite);

/// Row vectors phi_m = sum_i P(m, i) dz_i of an h-unitary coframe: h = P^T conj(P),
/// i.e. omega = sum_m phi_m ^ conj(phi_m). Built from the pivoted Cholesky factor.
CMatrix unitary_coframe(const CMatrix& h, double tol = constants::kTolPositiveDefinite);

/// Solves A x = b (A square) by partial-pivoting elimination.
std::vector<cplx> solve(CMatrix a, std::vector<cplx> b);

}  // namespace chernlab
