#pragma once

// Chern curvature, Ricci contractions, scalar curvatures, torsion and pointwise
// Chern-Weil forms.
//
// Index convention: Theta(i, j, k, l) = Theta_{i jbar k lbar}; (i, jbar) is the
// endomorphism slot and (k, lbar) the direction slot:
//   Theta_{i jbar k lbar} = -d_k d_lbar h_{i jbar} + h^{p qbar} d_k h_{i qbar} d_lbar h_{p jbar}.

#include <span>
#include <vector>

#include "chernlab/forms.hpp"
#include "chernlab/geometry.hpp"

namespace chernlab::curvature {

class Curvature4Tensor {
 public:
  Curvature4Tensor() = default;
  explicit Curvature4Tensor(int n) : n_(n), v_(static_cast<std::size_t>(n * n * n * n)) {}

  int dim() const noexcept { return n_; }
  cplx& operator()(int i, int j, int k, int l) { return v_[index(i, j, k, l)]; }
  const cplx& operator()(int i, int j, int k, int l) const { return v_[index(i, j, k, l)]; }

  double norm() const;
  /// max |Theta_{i jbar k lbar} - conj(Theta_{j ibar l kbar})|.
  double pair_symmetry_defect() const;
  friend Curvature4Tensor operator-(const Curvature4Tensor& a, const Curvature4Tensor& b);

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  int n_ = 0;
  std::vector<cplx> v_;
};

struct RicciValue {
  int kind = 1;
  CMatrix m;
};

struct ScalarPair {
  double s = 0.0;
  double s_hat = 0.0;
  /// Imaginary parts of the raw contractions, dropped from s and s_hat.
  double s_imag = 0.0;
  double s_hat_imag = 0.0;
};

struct TorsionValue {
  int n = 0;
  std::vector<cplx> t;  // T^i_{jk} at ((i * n + j) * n + k)
  tensor::FormValue eta;

  cplx operator()(int i, int j, int k) const { return t[static_cast<std::size_t>((i * n + j) * n + k)]; }
};

struct ChernFormsValue {
  tensor::FormValue c1;  // (1,1)
  tensor::FormValue c2;  // (2,2)
};

Curvature4Tensor chern_curvature(const PointGeometry& pg);
Curvature4Tensor chern_curvature(const Geometry& g, std::span<const cplx> p);

/// kind 1: Theta^(1)_{k lbar} = h^{i jbar} Theta_{i jbar k lbar}
/// kind 2: Theta^(2)_{i jbar} = h^{k lbar} Theta_{i jbar k lbar}
/// kind 3: Theta^(3)_{i lbar} = h^{k jbar} Theta_{i jbar k lbar}
RicciValue ricci(const Curvature4Tensor& theta, const CMatrix& h, int kind);

/// s = h^{k lbar} Theta^(1)_{k lbar}, s_hat = h^{i lbar} Theta^(3)_{i lbar}.
ScalarPair scalar_curvatures(const Curvature4Tensor& theta, const CMatrix& h);

/// T^i_{jk} = h^{i lbar} (d_j h_{k lbar} - d_k h_{j lbar}) and
/// eta = (1/(n-1)) sum_{j,k} T^k_{jk} dz_j. Throws std::invalid_argument for n = 1.
TorsionValue torsion(const PointGeometry& pg);
TorsionValue torsion(const Geometry& g, std::span<const cplx> p);

/// delbar eta at the point, bidegree (1,1), from exact jets.
tensor::FormValue delbar_eta(const PointGeometry& pg);

/// Omega^i_j = h^{i pbar} Theta_{j pbar k lbar} dz_k ^ dzbar_l,
/// c1 = (i/2pi) tr Omega, c2 = (1/8pi^2)(tr(Omega ^ Omega) - tr Omega ^ tr Omega).
ChernFormsValue chern_weil_forms(const Curvature4Tensor& theta, const CMatrix& h);

/// Theta from central finite differences of metric values only (no symbolic
/// derivatives). Test oracle. Throws std::invalid_argument for a step that is
/// not positive or too small to resolve.
Curvature4Tensor curvature_fd_oracle(const Geometry& g, std::span<const cplx> p, double step = 1e-4);

/// -d dbar log det h as a coefficient matrix, from a symbolic determinant.
/// Independent cross-check of first Ricci.
CMatrix ricci_from_log_det(const Geometry& g, std::span<const cplx> p);

}  // namespace chernlab::curvature
