#pragma once

// Second-order Taylor jets in the independent variables (z_1..z_n, zbar_1..zbar_n).
//
// A Jet carries a value, its first Wirtinger derivatives and its second
// derivatives, together with the order up to which those are valid. Algebra on
// jets is exact (no truncation error beyond the tracked order), so seeding jets
// with symbolic derivatives of the metric and pushing them through inverse
// metric, Hodge star and wedge products yields exact derivatives of composite
// fields at a point.

#include <algorithm>
#include <array>
#include <complex>
#include <stdexcept>

#include "chernlab/constants.hpp"

namespace chernlab {

using cplx = std::complex<double>;

class Jet {
 public:
  static constexpr int kVars = 2 * constants::kMaxDimension;
  static constexpr int kPairs = kVars * (kVars + 1) / 2;

  /// Slot of d/dz_k (k 0-based).
  static constexpr int holo(int k) { return k; }
  /// Slot of d/dzbar_k (k 0-based).
  static constexpr int anti(int k) { return constants::kMaxDimension + k; }
  static constexpr int pair(int a, int b) {
    if (a > b) std::swap(a, b);
    return b * (b + 1) / 2 + a;
  }

  Jet() = default;
  Jet(cplx v) : v_(v) {}  // NOLINT: constants convert implicitly
  Jet(double v) : v_(v) {}  // NOLINT

  cplx value() const noexcept { return v_; }
  int order() const noexcept { return order_; }
  cplx d(int slot) const noexcept { return d_[static_cast<std::size_t>(slot)]; }
  cplx dd(int a, int b) const noexcept { return dd_[static_cast<std::size_t>(pair(a, b))]; }

  void set_value(cplx v) { v_ = v; }
  void set_d(int slot, cplx v) { d_[static_cast<std::size_t>(slot)] = v; }
  void set_dd(int a, int b, cplx v) { dd_[static_cast<std::size_t>(pair(a, b))] = v; }
  void set_order(int order) { order_ = order; }

  /// Derivative along `slot`; the result is valid to one order less.
  Jet derivative(int slot) const {
    if (order_ < 1) throw std::logic_error("jet derivative beyond tracked order");
    Jet r;
    r.order_ = order_ - 1;
    r.v_ = d(slot);
    if (r.order_ >= 1) {
      for (int m = 0; m < kVars; ++m) r.d_[static_cast<std::size_t>(m)] = dd(slot, m);
    }
    return r;
  }

  Jet& operator+=(const Jet& b) {
    order_ = std::min(order_, b.order_);
    v_ += b.v_;
    if (order_ >= 1) for (int m = 0; m < kVars; ++m) d_[m] += b.d_[m];
    if (order_ >= 2) for (int m = 0; m < kPairs; ++m) dd_[m] += b.dd_[m];
    return *this;
  }
  Jet& operator-=(const Jet& b) { return *this += -b; }

  Jet& operator*=(cplx s) {
    v_ *= s;
    for (auto& x : d_) x *= s;
    for (auto& x : dd_) x *= s;
    return *this;
  }

  Jet operator-() const {
    Jet r = *this;
    r *= cplx(-1.0);
    return r;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.order_ = std::min(a.order_, b.order_);
    r.v_ = a.v_ * b.v_;
    if (r.order_ >= 1) {
      for (int m = 0; m < kVars; ++m) r.d_[m] = a.v_ * b.d_[m] + a.d_[m] * b.v_;
    }
    if (r.order_ >= 2) {
      for (int q = 0; q < kVars; ++q) {
        for (int p = 0; p <= q; ++p) {
          const int k = pair(p, q);
          r.dd_[k] = a.v_ * b.dd_[k] + a.dd_[k] * b.v_ + a.d_[p] * b.d_[q] + a.d_[q] * b.d_[p];
        }
      }
    }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    if (a.v_ == cplx(0.0)) throw std::domain_error("jet reciprocal of zero");
    Jet r;
    r.order_ = a.order_;
    const cplx inv = cplx(1.0) / a.v_;
    const cplx inv2 = inv * inv;
    r.v_ = inv;
    if (r.order_ >= 1) {
      for (int m = 0; m < kVars; ++m) r.d_[m] = -a.d_[m] * inv2;
    }
    if (r.order_ >= 2) {
      const cplx inv3 = inv2 * inv;
      for (int q = 0; q < kVars; ++q) {
        for (int p = 0; p <= q; ++p) {
          const int k = pair(p, q);
          r.dd_[k] = 2.0 * a.d_[p] * a.d_[q] * inv3 - a.dd_[k] * inv2;
        }
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  /// Conjugate field: d/dz_k conj(f) = conj(d/dzbar_k f).
  friend Jet conj(const Jet& a) {
    Jet r;
    r.order_ = a.order_;
    r.v_ = std::conj(a.v_);
    for (int m = 0; m < kVars; ++m) r.d_[mirror(m)] = std::conj(a.d_[m]);
    for (int q = 0; q < kVars; ++q) {
      for (int p = 0; p <= q; ++p) r.dd_[pair(mirror(p), mirror(q))] = std::conj(a.dd_[pair(p, q)]);
    }
    return r;
  }

 private:
  static constexpr int mirror(int slot) {
    return slot < constants::kMaxDimension ? slot + constants::kMaxDimension : slot - constants::kMaxDimension;
  }

  cplx v_{};
  int order_ = 2;
  std::array<cplx, kVars> d_{};
  std::array<cplx, kPairs> dd_{};
};

inline cplx value_of(const cplx& x) { return x; }
inline cplx value_of(const Jet& x) { return x.value(); }

}  // namespace chernlab
