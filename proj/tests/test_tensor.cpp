#include <algorithm>
#include <cmath>
#include <numeric>

#include "chernlab/codifferential.hpp"
#include "chernlab/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chernlab;
using namespace chernlab::tensor;
using testing_support::Point;

namespace {

// Oracles working in the real-index basis e_a (dz_a for a < n, dzbar_{a-n}
// otherwise), with forms as antisymmetric tensors.

using Tuple = std::vector<int>;

Tuple tuple_of(const FormValue& f, std::size_t x) {
  Tuple t;
  for (int k : indices(f.holo_mask(x))) t.push_back(k);
  for (int k : indices(f.anti_mask(x))) t.push_back(f.dim() + k);
  return t;
}

/// Coefficient of an arbitrary index tuple: sign of the sorting permutation times the stored value.
cplx tensor_entry(const FormValue& f, Tuple t) {
  int sign = 1;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t[i] == t[j]) return 0.0;
      if (t[i] > t[j]) sign = -sign;
    }
  std::sort(t.begin(), t.end());
  Mask hi = 0, lo = 0;
  int p = 0;
  for (int a : t) {
    if (a < f.dim()) {
      hi |= Mask{1} << a;
      ++p;
    } else {
      lo |= Mask{1} << (a - f.dim());
    }
  }
  if (p != f.p()) return 0.0;
  return static_cast<double>(sign) * f.at(hi, lo);
}

int perm_sign(const std::vector<int>& s) {
  int sign = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] > s[j]) sign = -sign;
  return sign;
}

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

/// Wedge by alternation: (a^b)[t] = 1/(k! l!) sum_sigma sgn(sigma) a[t_sigma(1..k)] b[t_sigma(k+1..)].
FormValue oracle_wedge(const FormValue& a, const FormValue& b) {
  const int n = a.dim(), k = a.degree(), l = b.degree();
  FormValue r(n, a.p() + b.p(), a.q() + b.q());
  for (std::size_t x = 0; x < r.size(); ++x) {
    const Tuple t = tuple_of(r, x);
    std::vector<int> s(t.size());
    std::iota(s.begin(), s.end(), 0);
    cplx sum = 0.0;
    do {
      Tuple ta, tb;
      for (int m = 0; m < k; ++m) ta.push_back(t[static_cast<std::size_t>(s[static_cast<std::size_t>(m)])]);
      for (int m = k; m < k + l; ++m) tb.push_back(t[static_cast<std::size_t>(s[static_cast<std::size_t>(m)])]);
      sum += static_cast<double>(perm_sign(s)) * tensor_entry(a, ta) * tensor_entry(b, tb);
    } while (std::next_permutation(s.begin(), s.end()));
    r[x] = sum / (factorial(k) * factorial(l));
  }
  return r;
}

/// Plain Cholesky h = L L^H (no pivoting).
CMatrix cholesky(const CMatrix& h) {
  const int n = h.size();
  CMatrix l(n);
  for (int j = 0; j < n; ++j) {
    cplx d = h(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * std::conj(l(j, k));
    l(j, j) = std::sqrt(d.real());
    for (int i = j + 1; i < n; ++i) {
      cplx s = h(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

/// Coefficients in the monomials of the unitary coframe theta = E dz (h = E^T conj(E), E = L^T):
/// dz_i = sum_a Einv(i,a) theta_a, so e_t = sum_u det(Lmap[t, u]) theta_u.
FormValue in_coframe(const FormValue& f, const CMatrix& h) {
  const int n = h.size();
  const CMatrix e = [&] {
    const CMatrix l = cholesky(h);
    CMatrix t(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = l(j, i);
    return t;
  }();
  const CMatrix einv = inverse(e);
  auto map = [&](int a, int b) -> cplx {
    if (a < n && b < n) return einv(a, b);
    if (a >= n && b >= n) return std::conj(einv(a - n, b - n));
    return 0.0;
  };
  FormValue r(n, f.p(), f.q());
  for (std::size_t u = 0; u < r.size(); ++u) {
    const Tuple tu = tuple_of(r, u);
    cplx s = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) {
      const Tuple tx = tuple_of(f, x);
      const int m = static_cast<int>(tx.size());
      CMatrix sub(std::max(m, 1));
      if (m == 0) {
        s += f[x];
        continue;
      }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub(i, j) = map(tx[static_cast<std::size_t>(i)], tu[static_cast<std::size_t>(j)]);
      s += f[x] * determinant(sub);
    }
    r[u] = s;
  }
  return r;
}

cplx oracle_inner(const FormValue& a, const FormValue& b, const CMatrix& h) {
  const FormValue x = in_coframe(a, h), y = in_coframe(b, h);
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

FormValue oracle_volume(const CMatrix& h) {
  const int n = h.size();
  const FormValue w = fundamental_form(h);
  FormValue p = w;
  for (int k = 1; k < n; ++k) p = oracle_wedge(p, w);
  cplx phase = 1.0;
  for (int k = 0; k < n; ++k) phase *= cplx(0, 1);
  return p * (phase / factorial(n));
}

FormValue random_form(manifolds::Rng& rng, int n, int p, int q) {
  FormValue f(n, p, q);
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = testing_support::random_complex(rng);
  return f;
}

double diff(const FormValue& a, const FormValue& b) { return norm(a - b); }

/// Random polynomial coefficients of degree <= 3 in z and zbar.
FormField random_field(manifolds::Rng& rng, int n, int p, int q) {
  FormField f(n, p, q);
  for (std::size_t x = 0; x < f.size(); ++x) {
    Expression e = Expression::literal(testing_support::random_complex(rng));
    for (int t = 0; t < 4; ++t) {
      Expression m = Expression::literal(testing_support::random_complex(rng));
      for (int d = 0; d < 1 + t % 3; ++d) {
        const int k = 1 + static_cast<int>(rng.uniform() * n);
        m = m * (rng.uniform() < 0.5 ? Expression::coord(k) : Expression::conj_coord(k));
      }
      e = e + m;
    }
    f[x] = e;
  }
  return f;
}

Geometry* make_geometry(const std::string& name, int n) {
  manifolds::BuiltinParams params;
  params.n = n;
  return new Geometry(manifolds::builtin(name, params));
}

}  // namespace

TEST_CASE("fundamental form examples") {
  const FormValue flat = fundamental_form(CMatrix::identity(2));
  CHECK(flat.at(1, 1) == cplx(1.0));
  CHECK(flat.at(2, 2) == cplx(1.0));
  CHECK(flat.at(1, 2) == cplx(0.0));

  const std::unique_ptr<Geometry> b(make_geometry("hopf_boothby", 2));
  const FormValue wb = evaluate(b->omega(), Point{1.0, 0.0});
  CHECK(wb.at(1, 1) == cplx(4.0));
  CHECK(wb.at(2, 2) == cplx(4.0));
  CHECK(wb.at(1, 2) == cplx(0.0));

  const std::unique_ptr<Geometry> w(make_geometry("iwasawa", 3));
  const FormValue ww = evaluate(w->omega(), Point{1.0, 0.3, -0.2});
  CHECK(ww.at(2, 2) == cplx(2.0));
  CHECK(ww.at(2, 4) == cplx(-1.0));
  CHECK(ww.at(4, 2) == cplx(-1.0));
  CHECK(ww.at(1, 1) == cplx(1.0));
  CHECK(ww.at(4, 4) == cplx(1.0));
}

TEST_CASE("wedge agrees with the alternation oracle") {
  manifolds::Rng rng(101);
  for (int n = 1; n <= 3; ++n)
    for (int p1 = 0; p1 <= n; ++p1)
      for (int q1 = 0; q1 <= n; ++q1)
        for (int p2 = 0; p1 + p2 <= n && p2 <= 2; ++p2)
          for (int q2 = 0; q1 + q2 <= n && q2 <= 2; ++q2) {
            if (p1 + q1 + p2 + q2 > 5) continue;
            const FormValue a = random_form(rng, n, p1, q1), b = random_form(rng, n, p2, q2);
            CHECK(diff(wedge(a, b), oracle_wedge(a, b)) < 1e-12 * (1 + norm(a) * norm(b)));
          }
}

TEST_CASE("omega^2 for the flat metric in dimension two") {
  const FormValue w = fundamental_form(CMatrix::identity(2));
  const FormValue w2 = wedge(w, w);
  CHECK(diff(w2, oracle_wedge(w, w)) < 1e-15);
  // Stored monomial dz1 dz2 dzbar1 dzbar2: -2. Reordered as dz1 dzbar1 dz2 dzbar2 it reads +2.
  CHECK(w2.at(3, 3) == cplx(-2.0));
  CHECK(tensor_entry(w2, {0, 2, 1, 3}) == cplx(2.0));
}

TEST_CASE("graded signs") {
  manifolds::Rng rng(103);
  for (int t = 0; t < 20; ++t) {
    const FormValue a = random_form(rng, 3, 1, 0);
    CHECK(norm(wedge(a, a)) < 1e-14);
  }
  const FormValue dz1 = monomial(2, 1, 0), dzb1 = monomial(2, 0, 1);
  CHECK(diff(wedge(dz1, dzb1), wedge(dzb1, dz1) * cplx(-1.0)) == 0.0);
  for (int t = 0; t < 40; ++t) {
    const int p1 = static_cast<int>(rng.uniform() * 3), q1 = static_cast<int>(rng.uniform() * 3);
    const int p2 = static_cast<int>(rng.uniform() * (4 - p1)), q2 = static_cast<int>(rng.uniform() * (4 - q1));
    const FormValue a = random_form(rng, 3, p1, q1), b = random_form(rng, 3, p2, q2);
    const double sign = ((a.degree() * b.degree()) & 1) ? -1.0 : 1.0;
    CHECK(diff(wedge(a, b), wedge(b, a) * cplx(sign)) < 1e-12 * (1 + norm(a) * norm(b)));
  }
  CHECK_THROWS_AS(wedge(random_form(rng, 2, 2, 0), random_form(rng, 2, 1, 0)), std::invalid_argument);
}

TEST_CASE("exterior derivative") {
  manifolds::Rng rng(107);
  {
    const std::unique_ptr<Geometry> f(make_geometry("flat_torus", 2));
    const auto [d, db] = exterior_d_split(f->omega(), Point{0.3, 0.1});
    CHECK(norm(d) == 0.0);
    CHECK(norm(db) == 0.0);
  }
  {
    // Boothby: omega = e^u omega_0 with u = log(4/nsq), so del omega = del u ^ omega.
    const std::unique_ptr<Geometry> b(make_geometry("hopf_boothby", 2));
    FormField u(2, 0, 0);
    u[0] = expr::parse_expression("log(4/nsq)", 2);
    const FormField du = partial(u);
    for (const Point& p : {Point{1.0, 0.0}, testing_support::random_point(rng, 2), testing_support::random_point(rng, 2)}) {
      const FormValue lhs = exterior_d_split(b->omega(), p).first;
      const FormValue rhs = wedge(evaluate(du, p), evaluate(b->omega(), p));
      CHECK(diff(lhs, rhs) < 1e-12 * (1 + norm(lhs)));
    }
  }
  for (int n = 2; n <= 3; ++n)
    for (int t = 0; t < 6; ++t) {
      const int p = static_cast<int>(rng.uniform() * (n - 1)), q = static_cast<int>(rng.uniform() * (n - 1));
      const FormField f = random_field(rng, n, p, q);
      const Point x = testing_support::random_point(rng, n);
      CHECK(norm(evaluate(partial(partial(f)), x)) < 1e-10);
      CHECK(norm(evaluate(partial_bar(partial_bar(f)), x)) < 1e-10);
      const FormValue a = evaluate(partial(partial_bar(f)), x), b = evaluate(partial_bar(partial(f)), x);
      CHECK(diff(a, b * cplx(-1.0)) < 1e-10 * (1 + norm(a)));
    }
}

TEST_CASE("inner product agrees with the unitary coframe oracle") {
  manifolds::Rng rng(109);
  CHECK(inner_product(monomial(2, 1, 0), monomial(2, 1, 0), CMatrix::identity(2)) == cplx(1.0));
  for (int n = 1; n <= 3; ++n) {
    const CMatrix h = testing_support::random_hpd(rng, n);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const FormValue a = random_form(rng, n, p, q), b = random_form(rng, n, p, q);
        const cplx ab = inner_product(a, b, h);
        CHECK(std::abs(ab - oracle_inner(a, b, h)) < 1e-10 * (1 + std::abs(ab)));
        CHECK(std::abs(ab - std::conj(inner_product(b, a, h))) < 1e-12 * (1 + std::abs(ab)));
        const cplx aa = inner_product(a, a, h);
        CHECK(aa.real() >= 0.0);
        CHECK(std::abs(aa.imag()) < 1e-12 * (1 + aa.real()));
      }
  }
  CHECK_THROWS_AS(inner_product(monomial(2, 1, 0), monomial(2, 0, 1), CMatrix::identity(2)), std::invalid_argument);
}

TEST_CASE("hodge star") {
  manifolds::Rng rng(113);
  for (int n = 1; n <= 3; ++n) {
    const CMatrix h = testing_support::random_hpd(rng, n);
    const FormValue vol = oracle_volume(h);
    CHECK(diff(volume_form(h), vol) < 1e-12 * norm(vol));
    // *1 = vol.
    CHECK(diff(hodge_star(unit_form<cplx>(n), h), vol) < 1e-12 * norm(vol));
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const FormValue a = random_form(rng, n, p, q), b = random_form(rng, n, p, q);
        // a ^ *conj(b) = (a, b) vol.
        const FormValue lhs = wedge(a, hodge_star(conj_form(b), h));
        CHECK(diff(lhs, vol * oracle_inner(a, b, h)) < 1e-10 * norm(vol) * (1 + norm(a) * norm(b)));
        // ** = (-1)^deg.
        const double sign = (a.degree() & 1) ? -1.0 : 1.0;
        CHECK(diff(hodge_star(hodge_star(a, h), h), a * cplx(sign)) < 1e-10 * (1 + norm(a)));
      }
  }
  // *omega = i^{n-2} omega^{n-1} / (n-1)! (the phase is 1 for n = 2), flat and curved.
  for (int n = 2; n <= 3; ++n) {
    for (const CMatrix& h : {CMatrix::identity(n), testing_support::random_hpd(rng, n)}) {
      const FormValue w = fundamental_form(h);
      FormValue wp = w;
      for (int k = 2; k < n; ++k) wp = wedge(wp, w);
      const cplx phase = n == 2 ? cplx(1.0) : cplx(0, 1);
      CHECK(diff(hodge_star(w, h), wp * (phase / factorial(n - 1))) < 1e-12 * (1 + norm(wp)));
    }
  }
  CMatrix bad = CMatrix::identity(2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(hodge_star(monomial(2, 1, 0), bad), SingularMetric);
}

TEST_CASE("codifferential of omega") {
  manifolds::Rng rng(127);
  {
    const std::unique_ptr<Geometry> f(make_geometry("flat_torus", 2));
    CHECK(norm(del_star_omega(*f, Point{0.2, 0.7})) == 0.0);
  }
  {
    // Kahler metric from the potential nsq + 0.1 |z1|^4 + 0.1 |z1|^2 |z2|^2.
    ManifoldSpec s = ManifoldSpec::flat(2);
    s.upper_entry(0, 0) = expr::parse_expression("1 + 0.4*z1*conj(z1) + 0.1*z2*conj(z2)", 2);
    s.upper_entry(0, 1) = expr::parse_expression("0.1*conj(z1)*z2", 2);
    s.upper_entry(1, 1) = expr::parse_expression("1 + 0.1*z1*conj(z1)", 2);
    const Geometry g(s);
    for (int t = 0; t < 10; ++t) {
      const Point p = testing_support::random_point(rng, 2);
      CHECK(norm(exterior_d_split(g.omega(), p).first) < 1e-12);
      CHECK(norm(del_star_omega(g, p)) < 1e-10);
    }
  }
  {
    const std::unique_ptr<Geometry> b(make_geometry("hopf_boothby", 2));
    const FormValue ds = del_star_omega(*b, Point{1.0, 0.0});
    CHECK(ds.p() == 0);
    CHECK(ds.q() == 1);
    CHECK(norm(ds) > 0.1);
  }
  // (d*omega, d*omega) >= 0 on random metrics.
  for (int t = 0; t < 10; ++t) {
    ManifoldSpec s = ManifoldSpec::flat(2);
    s.upper_entry(0, 0) = expr::parse_expression("2 + 0.3*z1*conj(z1)", 2);
    s.upper_entry(0, 1) = Expression::literal(testing_support::random_complex(rng) * 0.2) * Expression::coord(2);
    s.upper_entry(1, 1) = expr::parse_expression("2 + 0.2*z2*conj(z2) + 0.1*z1*conj(z1)", 2);
    const Geometry g(s);
    const Point p = testing_support::random_point(rng, 2, 0.5);
    const PointGeometry pg(g, p);
    const FormValue ds = del_star_omega(pg);
    const cplx nn = inner_product(ds, ds, pg.metric());
    CHECK(nn.real() >= 0.0);
    CHECK(std::abs(nn.imag()) < 1e-12);
  }
}
