#pragma once

// Geometry: a ManifoldSpec compiled for repeated evaluation. Symbolic first and
// second Wirtinger derivatives of the metric entries and the symbolic form
// fields used by the condition checks are built once, lazily and thread-safely.
//
// PointGeometry: everything needed at one point (metric, inverse, 2-jet).

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "chernlab/forms.hpp"
#include "chernlab/spec.hpp"

namespace chernlab {

class Geometry {
 public:
  explicit Geometry(ManifoldSpec spec);
  Geometry(const Geometry&) = delete;
  Geometry& operator=(const Geometry&) = delete;

  const ManifoldSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.n; }

  /// Full matrix of entry expressions (lower triangle = conj of upper).
  const Expression& entry(int i, int j) const { return entries_[static_cast<std::size_t>(i * spec_.n + j)]; }

  /// Metric values at p, Hermitian exactly (diagonal real, lower = conj upper).
  /// Throws ChartSingularity at poles; no positivity check.
  CMatrix metric(std::span<const cplx> p) const;

  /// Metric 2-jets at p (order 2 in every slot), Hermitian exactly.
  Matrix<Jet> metric_jet(std::span<const cplx> p) const;

  /// omega as a symbolic field and its powers omega^k, 0 <= k <= n.
  const tensor::FormField& omega() const;
  const tensor::FormField& omega_power(int k) const;

  /// Symbolic fields: del omega, d(omega^{n-1}) split, ddbar(omega^{n-1}), ddbar(omega^{n-2}).
  const tensor::FormField& del_omega() const;
  const tensor::FormField& del_omega_top() const;     // del omega^{n-1}
  const tensor::FormField& delbar_omega_top() const;  // delbar omega^{n-1}
  const tensor::FormField& ddbar_omega_top() const;   // del delbar omega^{n-1}
  const tensor::FormField& ddbar_omega_sub() const;   // del delbar omega^{n-2}

 private:
  struct Derivatives {
    // Local slots: 0..n-1 holomorphic, n..2n-1 antiholomorphic.
    std::vector<Expression> d;
    std::vector<Expression> dd;  // packed upper triangle over local slots
  };
  template <class F>
  const tensor::FormField& lazy(std::size_t slot, F&& build) const;
  const std::vector<Derivatives>& derivatives() const;

  ManifoldSpec spec_;
  std::vector<Expression> entries_;

  mutable std::once_flag deriv_once_;
  mutable std::vector<Derivatives> derivs_;  // upper entries, row-major
  // Per upper entry: value, first derivatives, packed second derivatives.
  mutable std::optional<expr::Program> jet_program_;

  static constexpr std::size_t kFields = 7 + constants::kMaxDimension;
  mutable std::array<std::once_flag, kFields> field_once_;
  mutable std::array<std::optional<tensor::FormField>, kFields> fields_;
};

/// Metric data at one regular point.
class PointGeometry {
 public:
  /// Throws ChartSingularity at a pole and SingularMetric when h(p) is not
  /// positive definite within tol.
  PointGeometry(const Geometry& g, std::span<const cplx> p, double tol = constants::kTolPositiveDefinite);

  const Geometry& geometry() const noexcept { return *g_; }
  int dim() const noexcept { return g_->dim(); }
  std::span<const cplx> point() const noexcept { return p_; }

  const CMatrix& metric() const noexcept { return h_; }
  const CMatrix& inverse() const noexcept { return inv_; }
  /// h^{p qbar} = inverse()(q, p).
  cplx inverse_upper(int p, int q) const { return inv_(q, p); }
  const Matrix<Jet>& metric_jet() const noexcept { return jet_; }
  const tensor::FormMetric<Jet>& jet_metric() const;

  /// d h_{i jbar} / dz_k and / dzbar_k; second mixed derivative d^2 / dz_k dzbar_l.
  cplx dh(int i, int j, int k) const { return jet_(i, j).d(Jet::holo(k)); }
  cplx dbh(int i, int j, int k) const { return jet_(i, j).d(Jet::anti(k)); }
  cplx ddbh(int i, int j, int k, int l) const { return jet_(i, j).dd(Jet::holo(k), Jet::anti(l)); }

 private:
  const Geometry* g_;
  std::vector<cplx> p_;
  CMatrix h_, inv_;
  Matrix<Jet> jet_;
  mutable std::once_flag jm_once_;
  mutable std::optional<tensor::FormMetric<Jet>> jm_;
};

}  // namespace chernlab
