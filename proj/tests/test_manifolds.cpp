#include <cmath>
#include <numbers>

#include "chernlab/curvature.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/manifolds.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chernlab;
using namespace chernlab::manifolds;

namespace {

BuiltinParams dim(int n) {
  BuiltinParams p;
  p.n = n;
  return p;
}

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

}  // namespace

TEST_CASE("builtin examples") {
  const ManifoldSpec b = builtin("hopf_boothby", dim(2));
  CHECK(b.n == 2);
  CHECK(structurally_equal(b.upper_entry(0, 0), expr::parse_expression("4/nsq", 2)));
  CHECK(b.upper_entry(0, 1).is_zero());
  CHECK(b.domain.kind == DomainKind::Annulus);
  CHECK(b.domain.r_min == 0.5);
  CHECK(b.domain.r_max == 1.0);
  REQUIRE(b.generators.size() == 1);
  CHECK(b.generators[0](0, 0) == cplx(0.5));
  CHECK(b.generators[0](0, 1) == cplx(0.0));

  BuiltinParams rot = dim(2);
  rot.rho0 = 0.25;
  rot.lambda = {0.25, 0.0};
  const ManifoldSpec r = builtin("hopf_boothby", rot);
  CHECK(std::abs(r.generators[0](0, 0) - cplx(0.0, 0.25)) < 1e-16);
  CHECK(r.domain.r_min == 0.25);

  const ManifoldSpec f = builtin("flat_torus", dim(3));
  CHECK(f.domain.kind == DomainKind::Torus);
  CHECK(f.domain.periods.size() == 6);
  CHECK(f.upper_entry(1, 1).is_one());

  const ManifoldSpec w = builtin("iwasawa", dim(3));
  CHECK(w.domain.kind == DomainKind::Box);
  CHECK(w.domain.lebesgue_volume(3) == 1.0);

  const ManifoldSpec c = builtin("conformal_torus", dim(2));
  CHECK(expr::is_real_valued(expr::parse_expression(expr::to_string(c.upper_entry(0, 0)), 2), 2));
  CHECK(c.upper_entry(0, 1).is_zero());

  CHECK(builtin_names().size() == 4);
}

TEST_CASE("builtin errors") {
  CHECK_THROWS_AS(builtin("klein_bottle"), std::invalid_argument);
  CHECK_THROWS_AS(builtin("iwasawa", dim(2)), std::invalid_argument);
  CHECK_THROWS_AS(builtin("flat_torus", dim(0)), std::invalid_argument);
  CHECK_THROWS_AS(builtin("flat_torus", dim(constants::kMaxDimension + 1)), std::invalid_argument);
  BuiltinParams bad = dim(2);
  bad.rho0 = 1.0;
  CHECK_THROWS_AS(builtin("hopf_boothby", bad), std::invalid_argument);
  bad.rho0 = 0.5;
  bad.lambda = {0.1};
  CHECK_THROWS_AS(builtin("hopf_boothby", bad), std::invalid_argument);
  BuiltinParams u = dim(2);
  u.u = "z1";
  CHECK_THROWS_AS(builtin("conformal_torus", u), std::invalid_argument);
  u.u = "z1 +";
  CHECK_THROWS_AS(builtin("conformal_torus", u), ParseError);
}

TEST_CASE("deck group invariance") {
  for (int n = 1; n <= 3; ++n) {
    BuiltinParams p = dim(n);
    p.lambda.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) p.lambda[static_cast<std::size_t>(k)] = 0.13 * (k + 1);
    const InvarianceResult r = group_invariance(builtin("hopf_boothby", p));
    CHECK(r.residual < 1e-12);
    CHECK(r.checked > 0);
  }
  // The flat metric is not invariant under a contraction.
  ManifoldSpec flat_on_annulus = builtin("hopf_boothby", dim(2));
  flat_on_annulus.upper_entry(0, 0) = Expression::literal(1.0);
  flat_on_annulus.upper_entry(1, 1) = Expression::literal(1.0);
  CHECK(group_invariance_check(flat_on_annulus) > 0.1);
  // An identity generator is trivially an isometry.
  ManifoldSpec id = builtin("conformal_torus", dim(2));
  id.generators = {CMatrix::identity(2)};
  CHECK(group_invariance_check(id) == 0.0);
  // No generators: nothing to check.
  CHECK(group_invariance_check(builtin("iwasawa", dim(3))) == 0.0);
  // A unitary rotation preserves the Boothby metric.
  ManifoldSpec u = builtin("hopf_boothby", dim(2));
  CMatrix rot(2);
  rot(0, 0) = rot(1, 1) = std::sqrt(0.5);
  rot(0, 1) = cplx(0, std::sqrt(0.5));
  rot(1, 0) = cplx(0, std::sqrt(0.5));
  u.generators.push_back(rot);
  CHECK(group_invariance_check(u) < 1e-12);
}

TEST_CASE("sampling") {
  const ManifoldSpec b = builtin("hopf_boothby", dim(3));
  CHECK(sample_domain(b.domain, 3, 0, 1).empty());
  CHECK_THROWS_AS(sample_domain(b.domain, 3, -1, 1), std::invalid_argument);
  CHECK(sample_domain(b.domain, 3, 50, 8) == sample_domain(b.domain, 3, 50, 8));
  CHECK(sample_domain(b.domain, 3, 50, 8) != sample_domain(b.domain, 3, 50, 9));
  for (const Point& p : sample_domain(b.domain, 3, 500, 2)) {
    double r2 = 0.0;
    for (const cplx& z : p) r2 += std::norm(z);
    CHECK(std::sqrt(r2) > 0.5 - 1e-15);
    CHECK(std::sqrt(r2) <= 1.0 + 1e-15);
  }
  const ManifoldSpec w = builtin("iwasawa", dim(3));
  for (const Point& p : sample_domain(w.domain, 3, 500, 2))
    for (const cplx& z : p) {
      CHECK(z.real() >= 0.0);
      CHECK(z.real() < 1.0);
      CHECK(z.imag() >= 0.0);
      CHECK(z.imag() < 1.0);
    }
  // Mean weight estimates the Lebesgue volume of the shell: pi^n/n! (1 - rho0^{2n}).
  const SampleSet s = sample_weighted(b.domain, 3, 40000, 4);
  double m = 0.0, m2 = 0.0;
  for (double x : s.weights) {
    m += x;
    m2 += x * x;
  }
  m /= 40000;
  const double se = std::sqrt((m2 / 40000 - m * m) / 40000);
  const double exact = std::pow(std::numbers::pi, 3) / 6.0 * (1.0 - std::pow(0.5, 6));
  CHECK(std::abs(m - exact) < 4 * se);
  Domain empty;
  empty.kind = DomainKind::Torus;
  empty.periods = {0.0, 1.0};
  CHECK_THROWS_AS(sample_domain(empty, 1, 3, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo integrals with closed forms") {
  const Geometry flat(builtin("flat_torus", dim(2)));
  const Integral vol = integrate([](const PointGeometry&) { return 1.0; }, flat, 100, 1);
  CHECK(std::abs(vol.value - 1.0) < 1e-14);
  CHECK(vol.standard_error < 1e-14);
  CHECK(vol.method == "monte-carlo");

  for (int n = 2; n <= 3; ++n) {
    const Geometry b(builtin("hopf_boothby", dim(n)));
    auto s_field = [](const PointGeometry& pg) {
      return curvature::scalar_curvatures(curvature::chern_curvature(pg), pg.metric()).s;
    };
    const Integral got = integrate(s_field, b, 200, 3);
    // s = n(n-1)/4 and det h = 4^n / |z|^{2n}, so the integral is s 4^n area(S^{2n-1}) log(1/rho0).
    const double exact = n * (n - 1) / 4.0 * std::pow(4.0, n) * 2 * std::pow(std::numbers::pi, n) / factorial(n - 1) *
                         std::log(2.0);
    CHECK(std::abs(got.value - exact) < 1e-10 * exact);
  }

  const Geometry w(builtin("iwasawa", dim(3)));
  const Integral zero = integrate(
      [](const PointGeometry& pg) {
        return curvature::scalar_curvatures(curvature::chern_curvature(pg), pg.metric()).s;
      },
      w, 100, 5);
  CHECK(std::abs(zero.value) < 1e-12);

  CHECK_THROWS_AS(integrate([](const PointGeometry&) { return 1.0; }, flat, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(integrate([](const PointGeometry&) { return std::nan(""); }, flat, 10, 1), QuadratureError);
  CHECK_THROWS_AS(
      integrate([](const PointGeometry& pg) { return pg.point()[0].real(); }, flat, 10, 1, 1e-6), QuadratureError);
}

TEST_CASE("Monte Carlo standard error scales as N^-1/2") {
  const Geometry flat(builtin("flat_torus", dim(2)));
  auto f = [](const PointGeometry& pg) { return std::cos(6.0 * pg.point()[0].real()) + pg.point()[1].imag(); };
  double ratio = 0.0;
  const int seeds = 8;
  for (int s = 0; s < seeds; ++s) {
    const double a = integrate(f, flat, 2000, 100 + s).standard_error;
    const double b = integrate(f, flat, 4000, 200 + s).standard_error;
    ratio += b / a;
  }
  ratio /= seeds;
  CHECK(ratio > 0.6);
  CHECK(ratio < 0.85);
}

TEST_CASE("paired components share the sample") {
  const Geometry flat(builtin("flat_torus", dim(2)));
  auto f = [](const PointGeometry& pg) {
    const double x = pg.point()[0].real();
    return std::vector<double>{x, x, 0.0};
  };
  const auto r = integrate(f, flat, 500, 7);
  REQUIRE(r.size() == 3);
  CHECK(r[0].value == r[1].value);
  CHECK(r[0].standard_error == r[1].standard_error);
  CHECK(r[2].value == 0.0);
}

TEST_CASE("grid quadrature converges at fourth order after extrapolation") {
  ManifoldSpec s = ManifoldSpec::flat(1);
  s.domain.kind = DomainKind::Box;
  s.domain.rectangles = {{0.0, 1.0, 0.0, 2.0}};
  const Geometry g(s);
  auto f = [](const PointGeometry& pg) {
    const cplx z = pg.point()[0];
    return std::vector<double>{std::exp(z.real()) * std::cos(z.imag())};
  };
  const double exact = (std::exp(1.0) - 1.0) * std::sin(2.0);
  const auto coarse = integrate_grid(f, g, 4);
  const auto fine = integrate_grid(f, g, 8);
  CHECK(coarse[0].method == "grid");
  const double e1 = std::abs(coarse[0].value - exact), e2 = std::abs(fine[0].value - exact);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
  // The reported error bounds the extrapolated one.
  CHECK(coarse[0].standard_error > e1);
  CHECK_THROWS_AS(integrate_grid(f, Geometry(builtin("hopf_boothby", dim(1))), 4), std::invalid_argument);
  CHECK_THROWS_AS(integrate_grid(f, g, 0), std::invalid_argument);
}
