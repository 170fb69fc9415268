#include "chernlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace chernlab::curvature {

using tensor::FormValue;
using tensor::Mask;

double Curvature4Tensor::norm() const {
  double s = 0.0;
  for (const cplx& x : v_) s += std::norm(x);
  return std::sqrt(s);
}

double Curvature4Tensor::pair_symmetry_defect() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) m = std::max(m, std::abs((*this)(i, j, k, l) - std::conj((*this)(j, i, l, k))));
  return m;
}

Curvature4Tensor operator-(const Curvature4Tensor& a, const Curvature4Tensor& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("curvature tensors of different dimension");
  Curvature4Tensor r(a.n_);
  for (std::size_t x = 0; x < a.v_.size(); ++x) r.v_[x] = a.v_[x] - b.v_[x];
  return r;
}

namespace {

/// Assembles Theta from metric values, first and mixed second derivatives.
template <class DH, class DBH, class DDBH>
Curvature4Tensor assemble(int n, const CMatrix& inv, DH&& dh, DBH&& dbh, DDBH&& ddbh) {
  Curvature4Tensor t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx s = -ddbh(i, j, k, l);
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) s += inv(q, p) * dh(i, q, k) * dbh(p, j, l);
          t(i, j, k, l) = s;
        }
  return t;
}

}  // namespace

Curvature4Tensor chern_curvature(const PointGeometry& pg) {
  return assemble(
      pg.dim(), pg.inverse(), [&](int i, int j, int k) { return pg.dh(i, j, k); },
      [&](int i, int j, int k) { return pg.dbh(i, j, k); },
      [&](int i, int j, int k, int l) { return pg.ddbh(i, j, k, l); });
}

Curvature4Tensor chern_curvature(const Geometry& g, std::span<const cplx> p) { return chern_curvature(PointGeometry(g, p)); }

RicciValue ricci(const Curvature4Tensor& theta, const CMatrix& h, int kind) {
  const int n = theta.dim();
  if (h.size() != n) throw std::invalid_argument("ricci: dimension mismatch");
  if (kind < 1 || kind > 3) throw std::invalid_argument("ricci: kind must be 1, 2 or 3");
  const CMatrix inv = inverse(h);
  RicciValue r{kind, CMatrix(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx s = 0.0;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          // h^{x ybar} = inv(y, x)
          switch (kind) {
            case 1:
              s += inv(y, x) * theta(x, y, a, b);
              break;
            case 2:
              s += inv(y, x) * theta(a, b, x, y);
              break;
            default:
              s += inv(y, x) * theta(a, y, x, b);
              break;
          }
        }
      r.m(a, b) = s;
    }
  return r;
}

ScalarPair scalar_curvatures(const Curvature4Tensor& theta, const CMatrix& h) {
  const int n = theta.dim();
  const CMatrix inv = inverse(h);
  const CMatrix r1 = ricci(theta, h, 1).m;
  const CMatrix r3 = ricci(theta, h, 3).m;
  cplx s = 0.0, sh = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      s += inv(l, k) * r1(k, l);
      sh += inv(l, k) * r3(k, l);
    }
  return {s.real(), sh.real(), s.imag(), sh.imag()};
}

namespace {

/// eta_j = (1/(n-1)) sum_{k,l} h^{k lbar} (d_j h_{k lbar} - d_k h_{j lbar}) over any scalar type.
template <class T, class Inv, class D>
std::vector<T> eta_coefficients(int n, Inv&& inv_upper, D&& dh) {
  std::vector<T> eta(static_cast<std::size_t>(n), T(0.0));
  const double c = 1.0 / (n - 1);
  for (int j = 0; j < n; ++j) {
    T s(0.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) s = s + inv_upper(k, l) * (dh(k, l, j) - dh(j, l, k));
    eta[static_cast<std::size_t>(j)] = s * cplx(c);
  }
  return eta;
}

}  // namespace

TorsionValue torsion(const PointGeometry& pg) {
  const int n = pg.dim();
  if (n < 2) throw std::invalid_argument("torsion one-form needs n >= 2");
  TorsionValue r;
  r.n = n;
  r.t.resize(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (int l = 0; l < n; ++l) s += pg.inverse_upper(i, l) * (pg.dh(k, l, j) - pg.dh(j, l, k));
        r.t[static_cast<std::size_t>((i * n + j) * n + k)] = s;
      }
  r.eta = FormValue(n, 1, 0);
  for (int j = 0; j < n; ++j) {
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) s += r(k, j, k);
    r.eta.at(Mask{1} << j, 0) = s / static_cast<double>(n - 1);
  }
  return r;
}

TorsionValue torsion(const Geometry& g, std::span<const cplx> p) { return torsion(PointGeometry(g, p)); }

FormValue delbar_eta(const PointGeometry& pg) {
  const int n = pg.dim();
  if (n < 2) throw std::invalid_argument("torsion one-form needs n >= 2");
  const Matrix<Jet>& h = pg.metric_jet();
  const Matrix<Jet>& inv = pg.jet_metric().inverse_metric();
  const auto eta = eta_coefficients<Jet>(
      n, [&](int k, int l) { return inv(l, k); },
      [&](int i, int l, int j) { return h(i, l).derivative(Jet::holo(j)); });
  tensor::JetForm form(n, 1, 0);
  for (int j = 0; j < n; ++j) form.at(Mask{1} << j, 0) = eta[static_cast<std::size_t>(j)];
  return tensor::values(tensor::partial_bar(form));
}

ChernFormsValue chern_weil_forms(const Curvature4Tensor& theta, const CMatrix& h) {
  const int n = theta.dim();
  if (n < 2) throw std::invalid_argument("chern_weil_forms needs n >= 2");
  const CMatrix inv = inverse(h);
  std::vector<FormValue> omega(static_cast<std::size_t>(n * n), FormValue(n, 1, 1));
  auto at = [&](int i, int j) -> FormValue& { return omega[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx s = 0.0;
          for (int p = 0; p < n; ++p) s += inv(p, i) * theta(j, p, k, l);
          at(i, j).at(Mask{1} << k, Mask{1} << l) = s;
        }
  FormValue tr(n, 1, 1);
  FormValue tr2(n, 2, 2);
  for (int i = 0; i < n; ++i) {
    tr += at(i, i);
    for (int j = 0; j < n; ++j) tr2 += tensor::wedge(at(i, j), at(j, i));
  }
  ChernFormsValue r;
  r.c1 = tr * cplx(0.0, constants::kChernClass1Scale);
  r.c2 = (tr2 - tensor::wedge(tr, tr)) * cplx(constants::kChernClass2Scale);
  return r;
}

Curvature4Tensor curvature_fd_oracle(const Geometry& g, std::span<const cplx> p, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("finite-difference step must be positive");
  double scale = 1.0;
  for (const cplx& z : p) scale = std::max(scale, std::abs(z));
  if (step < 1e3 * std::numeric_limits<double>::epsilon() * scale)
    throw std::invalid_argument("finite-difference step underflows at this point");
  const int n = g.dim();
  const int m = 2 * n;  // real axes: 2k = Re z_k, 2k+1 = Im z_k
  std::vector<cplx> q(p.begin(), p.end());
  auto shifted = [&](std::initializer_list<std::pair<int, double>> moves) {
    std::vector<cplx> x = q;
    for (auto [axis, d] : moves) x[static_cast<std::size_t>(axis / 2)] += (axis % 2) ? cplx(0.0, d) : cplx(d, 0.0);
    return g.metric(x);
  };
  const CMatrix h0 = g.metric(q);
  const double e = step;
  // First real partials and mixed second real partials of every entry.
  std::vector<CMatrix> d1(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const CMatrix hp = shifted({{a, e}}), hm = shifted({{a, -e}});
    CMatrix d(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = (hp(i, j) - hm(i, j)) / (2.0 * e);
    d1[static_cast<std::size_t>(a)] = d;
  }
  std::vector<CMatrix> d2(static_cast<std::size_t>(m * m));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      CMatrix d(n);
      if (a == b) {
        const CMatrix hp = shifted({{a, e}}), hm = shifted({{a, -e}});
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) d(i, j) = (hp(i, j) - 2.0 * h0(i, j) + hm(i, j)) / (e * e);
      } else {
        const CMatrix pp = shifted({{a, e}, {b, e}}), pm = shifted({{a, e}, {b, -e}});
        const CMatrix mp = shifted({{a, -e}, {b, e}}), mm = shifted({{a, -e}, {b, -e}});
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) d(i, j) = (pp(i, j) - pm(i, j) - mp(i, j) + mm(i, j)) / (4.0 * e * e);
      }
      d2[static_cast<std::size_t>(a * m + b)] = d;
      d2[static_cast<std::size_t>(b * m + a)] = d;
    }
  const cplx I(0.0, 1.0);
  // d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2.
  auto dz = [&](int i, int j, int k) { return 0.5 * (d1[2 * k](i, j) - I * d1[2 * k + 1](i, j)); };
  auto dzb = [&](int i, int j, int k) { return 0.5 * (d1[2 * k](i, j) + I * d1[2 * k + 1](i, j)); };
  auto dd = [&](int i, int j, int k, int l) {
    auto D = [&](int a, int b) { return d2[static_cast<std::size_t>(a * m + b)](i, j); };
    return 0.25 * (D(2 * k, 2 * l) + I * D(2 * k, 2 * l + 1) - I * D(2 * k + 1, 2 * l) + D(2 * k + 1, 2 * l + 1));
  };
  return assemble(n, inverse(h0), dz, dzb, dd);
}

CMatrix ricci_from_log_det(const Geometry& g, std::span<const cplx> p) {
  const int n = g.dim();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Expression det;
  do {
    int inversions = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) inversions += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
    Expression term = Expression::literal((inversions & 1) ? -1.0 : 1.0);
    for (int a = 0; a < n; ++a) term = term * g.entry(a, perm[static_cast<std::size_t>(a)]);
    det = det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const Expression ld = log(det);
  CMatrix r(n);
  for (int k = 0; k < n; ++k) {
    const Expression dk = expr::wirtinger_d(ld, k + 1, expr::Wirtinger::Holomorphic);
    for (int l = 0; l < n; ++l)
      r(k, l) = -expr::eval(expr::wirtinger_d(dk, l + 1, expr::Wirtinger::Antiholomorphic), p);
  }
  return r;
}

}  // namespace chernlab::curvature
