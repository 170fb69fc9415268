#pragma once

// (p,q)-forms at a point (FormValue), as Jet-valued local fields and as
// Expression-valued fields (FormField), with wedge, conjugation, the split
// exterior derivative, the metric inner product and the Hodge star.
//
// A basis monomial is dz_I ^ dzbar_J with I and J strictly increasing; both are
// stored as bitmasks (bit k = index k, 0-based). All holomorphic factors come
// first, so e.g. dz1 ^ dz2 ^ dzbar1 ^ dzbar2 is the top monomial for n = 2.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "chernlab/constants.hpp"
#include "chernlab/expr.hpp"
#include "chernlab/jet.hpp"
#include "chernlab/linalg.hpp"

namespace chernlab::tensor {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// All masks of p bits among n, in increasing lexicographic order of the index
/// lists. Empty when p < 0 or p > n.
const std::vector<Mask>& subsets(int n, int p);
/// Position of `m` inside subsets(n, popcount(m)).
std::size_t subset_rank(int n, Mask m);

/// Sign of the permutation that sorts the concatenation (a, b) of two sorted
/// index lists; 0 when they overlap.
inline int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int k = __builtin_ctz(rest);
    inversions += popcount(a >> (k + 1));
  }
  return (inversions & 1) ? -1 : 1;
}

/// Indices of a mask, 0-based, increasing.
std::vector<int> indices(Mask m);

template <class T>
class BasicForm {
 public:
  BasicForm() = default;
  BasicForm(int n, int p, int q) : n_(n), p_(p), q_(q) {
    if (n < 1 || n > constants::kMaxDimension) throw std::invalid_argument("form dimension out of range");
    // Degree n + 1 is accepted and denotes the (empty) zero space, so del of a
    // top-degree form needs no special case.
    if (p < 0 || q < 0 || p > n + 1 || q > n + 1) throw std::invalid_argument("form bidegree out of range");
    c_.resize(subsets(n, p).size() * subsets(n, q).size());
  }

  int dim() const noexcept { return n_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int degree() const noexcept { return p_ + q_; }
  std::size_t size() const noexcept { return c_.size(); }

  Mask holo_mask(std::size_t a) const { return subsets(n_, p_)[a / cols()]; }
  Mask anti_mask(std::size_t a) const { return subsets(n_, q_)[a % cols()]; }

  T& operator[](std::size_t a) { return c_[a]; }
  const T& operator[](std::size_t a) const { return c_[a]; }
  T& at(Mask i, Mask j) { return c_[slot(i, j)]; }
  const T& at(Mask i, Mask j) const { return c_[slot(i, j)]; }

  BasicForm& operator+=(const BasicForm& b) {
    check_same(b);
    for (std::size_t a = 0; a < c_.size(); ++a) c_[a] = c_[a] + b.c_[a];
    return *this;
  }
  BasicForm& operator-=(const BasicForm& b) {
    check_same(b);
    for (std::size_t a = 0; a < c_.size(); ++a) c_[a] = c_[a] - b.c_[a];
    return *this;
  }
  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(BasicForm a, cplx s) {
    for (auto& x : a.c_) x = x * s;
    return a;
  }
  friend BasicForm operator*(cplx s, BasicForm a) { return std::move(a) * s; }

 private:
  std::size_t cols() const { return subsets(n_, q_).size(); }
  std::size_t slot(Mask i, Mask j) const {
    if (popcount(i) != p_ || popcount(j) != q_) throw std::invalid_argument("multi-index does not match bidegree");
    return subset_rank(n_, i) * cols() + subset_rank(n_, j);
  }
  void check_same(const BasicForm& b) const {
    if (b.n_ != n_ || b.p_ != p_ || b.q_ != q_) throw std::invalid_argument("bidegree mismatch");
  }

  int n_ = 0, p_ = 0, q_ = 0;
  std::vector<T> c_;
};

using FormValue = BasicForm<cplx>;
using JetForm = BasicForm<Jet>;
using FormField = BasicForm<Expression>;

/// Sign of (dz_I dzbar_J) ^ (dz_K dzbar_L) relative to dz_{I+K} dzbar_{J+L}; 0 on overlap.
inline int wedge_sign(Mask i, Mask j, Mask k, Mask l) {
  const int s = merge_sign(i, k) * merge_sign(j, l);
  if (s == 0) return 0;
  return ((popcount(j) * popcount(k)) & 1) ? -s : s;
}

template <class T>
BasicForm<T> wedge(const BasicForm<T>& a, const BasicForm<T>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge of forms of different dimension");
  const int n = a.dim();
  if (a.p() + b.p() > n || a.q() + b.q() > n) throw std::invalid_argument("wedge degree overflow");
  BasicForm<T> r(n, a.p() + b.p(), a.q() + b.q());
  for (std::size_t x = 0; x < a.size(); ++x) {
    const Mask i = a.holo_mask(x), j = a.anti_mask(x);
    for (std::size_t y = 0; y < b.size(); ++y) {
      const Mask k = b.holo_mask(y), l = b.anti_mask(y);
      const int s = wedge_sign(i, j, k, l);
      if (s == 0) continue;
      T term = a[x] * b[y];
      T& dst = r.at(i | k, j | l);
      dst = s > 0 ? dst + term : dst - term;
    }
  }
  return r;
}

/// Complex conjugate form: conj(f dz_I dzbar_J) = (-1)^{pq} conj(f) dz_J dzbar_I.
template <class T>
BasicForm<T> conj_form(const BasicForm<T>& a) {
  BasicForm<T> r(a.dim(), a.q(), a.p());
  const bool flip = (a.p() * a.q()) & 1;
  for (std::size_t x = 0; x < a.size(); ++x) {
    T c = conj(a[x]);
    r.at(a.anti_mask(x), a.holo_mask(x)) = flip ? -c : c;
  }
  return r;
}

/// del with a coefficient derivative deriv(c, k) = d c / dz_k (k 0-based).
template <class T, class Deriv>
BasicForm<T> partial(const BasicForm<T>& f, Deriv&& deriv) {
  const int n = f.dim();
  BasicForm<T> r(n, f.p() + 1, f.q());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const Mask i = f.holo_mask(x), j = f.anti_mask(x);
    for (int k = 0; k < n; ++k) {
      const Mask bit = Mask{1} << k;
      const int s = merge_sign(bit, i);
      if (s == 0) continue;
      T d = deriv(f[x], k);
      T& dst = r.at(i | bit, j);
      dst = s > 0 ? dst + d : dst - d;
    }
  }
  return r;
}

/// delbar with deriv(c, k) = d c / dzbar_k.
template <class T, class Deriv>
BasicForm<T> partial_bar(const BasicForm<T>& f, Deriv&& deriv) {
  const int n = f.dim();
  BasicForm<T> r(n, f.p(), f.q() + 1);
  const int parity = (f.p() & 1) ? -1 : 1;
  for (std::size_t x = 0; x < f.size(); ++x) {
    const Mask i = f.holo_mask(x), j = f.anti_mask(x);
    for (int k = 0; k < n; ++k) {
      const Mask bit = Mask{1} << k;
      const int s = parity * merge_sign(bit, j);
      if (merge_sign(bit, j) == 0) continue;
      T d = deriv(f[x], k);
      T& dst = r.at(i, j | bit);
      dst = s > 0 ? dst + d : dst - d;
    }
  }
  return r;
}

// Symbolic and jet specializations of del / delbar.
FormField partial(const FormField& f);
FormField partial_bar(const FormField& f);
JetForm partial(const JetForm& f);
JetForm partial_bar(const JetForm& f);

FormValue evaluate(const FormField& f, std::span<const cplx> point);
FormValue values(const JetForm& f);

/// (del f, delbar f) at `point`. Throws ChartSingularity where a coefficient is singular.
std::pair<FormValue, FormValue> exterior_d_split(const FormField& f, std::span<const cplx> point);

/// omega = sum h_{i jbar} dz_i ^ dzbar_j for a matrix of coefficients.
template <class T>
BasicForm<T> fundamental_form(const Matrix<T>& h) {
  const int n = h.size();
  BasicForm<T> w(n, 1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w.at(Mask{1} << i, Mask{1} << j) = h(i, j);
  return w;
}

/// (1,1)-form with coefficient matrix m: sum m(k,l) dz_k ^ dzbar_l.
template <class T>
BasicForm<T> as_form(const Matrix<T>& m) {
  return fundamental_form(m);
}

template <class T>
Matrix<T> coefficient_matrix(const BasicForm<T>& f) {
  if (f.p() != 1 || f.q() != 1) throw std::invalid_argument("coefficient_matrix needs a (1,1)-form");
  Matrix<T> m(f.dim());
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) m(i, j) = f.at(Mask{1} << i, Mask{1} << j);
  return m;
}

/// Frobenius norm of the coefficient table (not the metric norm).
double norm(const FormValue& f);
double max_abs(const FormValue& f);

/// Hermitian inner product on forms induced by h. The h-unitary coframe
/// monomials are orthonormal: (dz_a, dz_b) = h^{a bbar} = inv(h)(b, a), and the
/// Gram entry of two monomials is a product of two minors of the inverse.
template <class T>
class FormMetric {
 public:
  explicit FormMetric(const Matrix<T>& h) : h_(h), inv_(inverse(h)), det_(determinant(h)) {
    const std::size_t span = std::size_t{1} << h.size();
    minors_.assign(2 * span * span, T(0.0));
    for (Mask r = 0; r < span; ++r)
      for (Mask c = 0; c < span; ++c)
        if (popcount(r) == popcount(c))
          for (int anti = 0; anti < 2; ++anti) minors_[slot(r, c, anti != 0)] = compute_minor(r, c, anti != 0);
  }

  int dim() const noexcept { return h_.size(); }
  const Matrix<T>& metric() const noexcept { return h_; }
  const Matrix<T>& inverse_metric() const noexcept { return inv_; }
  const T& det() const noexcept { return det_; }

  /// (dz_I dzbar_J, dz_K dzbar_L).
  T gram(Mask i, Mask j, Mask k, Mask l) const {
    if (popcount(i) != popcount(k) || popcount(j) != popcount(l)) return T(0.0);
    return minors_[slot(i, k, false)] * minors_[slot(j, l, true)];
  }

  /// Coefficient c with vol = c * e_top: i^n (-1)^{n(n-1)/2} det h.
  T volume_coefficient() const { return det_ * volume_phase(dim()); }

  static cplx volume_phase(int n) {
    static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx c = powers[n % 4];
    return ((n * (n - 1) / 2) & 1) ? -c : c;
  }

 private:
  // Holomorphic slots use g1(a,b) = inv(b,a); antiholomorphic use g2(a,b) = inv(a,b).
  std::size_t slot(Mask rows, Mask cols, bool anti) const {
    const std::size_t span = std::size_t{1} << h_.size();
    return ((anti ? span : 0) + rows) * span + cols;
  }

  T compute_minor(Mask rows, Mask cols, bool anti) const {
    const std::vector<int> r = indices(rows), c = indices(cols);
    const int m = static_cast<int>(r.size());
    if (m == 0) return T(1.0);
    Matrix<T> sub(m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const int ia = r[static_cast<std::size_t>(a)], ib = c[static_cast<std::size_t>(b)];
        sub(a, b) = anti ? inv_(ia, ib) : inv_(ib, ia);
      }
    return determinant(sub);
  }

  Matrix<T> h_, inv_;
  T det_;
  // Minors of the inverse for every pair of equal-size index sets.
  std::vector<T> minors_;
};

template <class T>
T inner_product(const BasicForm<T>& a, const BasicForm<T>& b, const FormMetric<T>& g) {
  if (a.dim() != b.dim() || a.p() != b.p() || a.q() != b.q())
    throw std::invalid_argument("inner product of forms of different bidegree");
  T s(0.0);
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      s = s + a[x] * conj(b[y]) * g.gram(a.holo_mask(x), a.anti_mask(x), b.holo_mask(y), b.anti_mask(y));
    }
  }
  return s;
}

/// Sign of e_A ^ e_{A^c} relative to e_top, for A = (I, J).
inline int complement_sign(int n, Mask i, Mask j) {
  const Mask full = (Mask{1} << n) - 1;
  return wedge_sign(i, j, full & ~i, full & ~j);
}

/// Complex-linear Hodge star with a ^ *conj(b) = (a, b) vol; maps (r, s) to (n-s, n-r).
template <class T>
BasicForm<T> hodge_star(const BasicForm<T>& x, const FormMetric<T>& g) {
  const int n = x.dim();
  const int p = x.q(), q = x.p();  // a ranges over (p, q) forms, conj(b) = x
  const Mask full = (Mask{1} << n) - 1;
  BasicForm<T> y(n, n - p, n - q);
  const T scale = g.volume_coefficient() * cplx(((p * q) & 1) ? -1.0 : 1.0);
  for (Mask i : subsets(n, p)) {
    for (Mask j : subsets(n, q)) {
      T s(0.0);
      for (std::size_t b = 0; b < x.size(); ++b) {
        // x's monomial (K', L') comes from conj(b) with b = (L', K').
        const Mask k = x.anti_mask(b), l = x.holo_mask(b);
        s = s + g.gram(i, j, k, l) * x[b];
      }
      y.at(full & ~i, full & ~j) = s * scale * cplx(complement_sign(n, i, j));
    }
  }
  return y;
}

/// starbar(a) = *(conj a).
template <class T>
BasicForm<T> hodge_star_bar(const BasicForm<T>& x, const FormMetric<T>& g) {
  return hodge_star(conj_form(x), g);
}

/// Value-level Hodge star. Throws SingularMetric unless h is positive definite.
FormValue hodge_star(const FormValue& a, const CMatrix& h);
cplx inner_product(const FormValue& a, const FormValue& b, const CMatrix& h);

/// The volume form vol = i^n omega^n / n! as a top-degree FormValue.
FormValue volume_form(const CMatrix& h);

/// The constant form 1 of bidegree (0,0).
template <class T>
BasicForm<T> unit_form(int n) {
  BasicForm<T> f(n, 0, 0);
  if constexpr (std::is_same_v<T, Expression>) {
    f[0] = Expression::literal(1.0);
  } else {
    f[0] = T(1.0);
  }
  return f;
}

/// Single monomial dz_I ^ dzbar_J with coefficient c.
inline FormValue monomial(int n, Mask i, Mask j, cplx c = 1.0) {
  FormValue f(n, popcount(i), popcount(j));
  f.at(i, j) = c;
  return f;
}

}  // namespace chernlab::tensor
