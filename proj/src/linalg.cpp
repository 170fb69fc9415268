#include "chernlab/linalg.hpp"

#include <limits>
#include <sstream>

namespace chernlab {

PivotedCholesky pivoted_cholesky(const CMatrix& h, double tol) {
  const int n = h.size();
  CMatrix a = h;
  PivotedCholesky out;
  out.lower = CMatrix(n);
  out.perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.perm[static_cast<std::size_t>(i)] = i;
  out.min_pivot = n > 0 ? std::numeric_limits<double>::infinity() : 0.0;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int j = k + 1; j < n; ++j) {
      if (a(j, j).real() > a(piv, piv).real()) piv = j;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (int j = 0; j < n; ++j) std::swap(a(j, k), a(j, piv));
      for (int j = 0; j < k; ++j) std::swap(out.lower(k, j), out.lower(piv, j));
      std::swap(out.perm[static_cast<std::size_t>(k)], out.perm[static_cast<std::size_t>(piv)]);
    }
    const double d = a(k, k).real();
    if (!(d > tol)) {
      std::ostringstream msg;
      msg << "metric is not positive definite: Cholesky pivot " << d << " at step " << k + 1 << " (tolerance "
          << tol << ")";
      throw SingularMetric(msg.str());
    }
    out.min_pivot = std::min(out.min_pivot, d);
    const double s = std::sqrt(d);
    out.lower(k, k) = s;
    for (int i = k + 1; i < n; ++i) out.lower(i, k) = a(i, k) / s;
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) a(i, j) -= out.lower(i, k) * std::conj(out.lower(j, k));
    }
  }
  return out;
}

CMatrix unitary_coframe(const CMatrix& h, double tol) {
  const PivotedCholesky c = pivoted_cholesky(h, tol);
  const int n = h.size();
  CMatrix p(n);
  for (int a = 0; a < n; ++a) {
    const int i = c.perm[static_cast<std::size_t>(a)];
    for (int m = 0; m < n; ++m) p(m, i) = c.lower(a, m);
  }
  return p;
}

std::vector<cplx> solve(CMatrix a, std::vector<cplx> b) {
  const int n = a.size();
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (a(piv, c) == cplx(0.0)) throw SingularMetric("singular linear system");
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(b[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(piv)]);
    }
    for (int r = c + 1; r < n; ++r) {
      const cplx f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
    }
  }
  std::vector<cplx> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    cplx s = b[static_cast<std::size_t>(r)];
    for (int j = r + 1; j < n; ++j) s -= a(r, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(r)] = s / a(r, r);
  }
  return x;
}

}  // namespace chernlab
