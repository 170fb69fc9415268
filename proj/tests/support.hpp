#pragma once

// Shared helpers for the test suites: seeded random points, metrics and
// expressions.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "chernlab/classify.hpp"
#include "chernlab/manifolds.hpp"

namespace testing_support {

using namespace chernlab;
using Point = std::vector<cplx>;

inline Point random_point(manifolds::Rng& rng, int n, double scale = 1.0) {
  Point p(static_cast<std::size_t>(n));
  for (auto& z : p) z = cplx(rng.normal(), rng.normal()) * scale;
  return p;
}

inline cplx random_complex(manifolds::Rng& rng) { return {rng.normal(), rng.normal()}; }

/// Random positive definite Hermitian matrix A^H A + I.
inline CMatrix random_hpd(manifolds::Rng& rng, int n) {
  CMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = random_complex(rng) * 0.6;
  CMatrix h = adjoint(a) * a;
  for (int i = 0; i < n; ++i) h(i, i) += 1.0;
  return h;
}

/// Random expression tree that is regular everywhere (quotients and logs only
/// of 2 + nsq), built from the grammar's node kinds.
inline Expression random_expression(manifolds::Rng& rng, int n, int depth) {
  const int pick = static_cast<int>(rng.uniform() * (depth <= 0 ? 4 : 10));
  auto coord = [&] { return 1 + static_cast<int>(rng.uniform() * n); };
  switch (pick) {
    case 0:
      return Expression::coord(coord());
    case 1:
      return Expression::conj_coord(coord());
    case 2:
      return Expression::literal(cplx(std::round(rng.normal() * 40) / 16, std::round(rng.normal() * 40) / 16));
    case 3:
      return Expression::nsq();
    case 4:
    case 5:
      return random_expression(rng, n, depth - 1) + random_expression(rng, n, depth - 1);
    case 6:
    case 7:
      return random_expression(rng, n, depth - 1) * random_expression(rng, n, depth - 1);
    case 8:
      return random_expression(rng, n, depth - 1) /
             (Expression::literal(2.0) + Expression::nsq());
    default: {
      const int k = static_cast<int>(rng.uniform() * 3);
      if (k == 0) return pow(random_expression(rng, n, depth - 1), 2 + static_cast<int>(rng.uniform() * 2));
      if (k == 1) return exp(random_expression(rng, n, depth - 1) * Expression::literal(0.1));
      return log(Expression::literal(2.0) + Expression::nsq());
    }
  }
}

/// Real periodic trigonometric polynomial in Re z_k, Im z_k with unit periods
/// and small random amplitudes, as expression text.
inline std::string random_periodic_factor(manifolds::Rng& rng, int n, int coords, double amplitude) {
  std::string u = "0";
  char buf[256];
  for (int k = 1; k <= std::min(n, coords); ++k) {
    const double a = amplitude * rng.normal(), b = amplitude * rng.normal();
    // cos(2 pi x) = (exp(pi i (z+zbar)) + exp(-pi i (z+zbar)))/2, likewise for y = (z - zbar)/(2i).
    std::snprintf(buf, sizeof buf,
                  " + %.17g*(exp(pi*i*(z%d+conj(z%d)))+exp(-pi*i*(z%d+conj(z%d))))"
                  " + %.17g*(exp(pi*(z%d-conj(z%d)))+exp(-pi*(z%d-conj(z%d))))",
                  a / 2, k, k, k, k, b / 2, k, k, k, k);
    u += buf;
  }
  return u;
}

/// Real factor invariant under z -> rho0 z: periodic in log|z| plus a
/// direction-only term.
inline std::string random_hopf_factor(manifolds::Rng& rng, int n, double rho0, double amplitude) {
  const double w = std::numbers::pi / std::log(rho0);  // cos(2 pi log|z| / log rho0) with log|z| = log(nsq)/2
  char buf[512];
  const double a = amplitude * rng.normal(), b = amplitude * rng.normal();
  std::snprintf(buf, sizeof buf, "%.17g*(exp(%.17g*i*log(nsq))+exp(-%.17g*i*log(nsq)))", a / 2, w, w);
  std::string u = buf;
  if (n >= 2) {
    std::snprintf(buf, sizeof buf, " + %.17g*(z1*conj(z2)+z2*conj(z1))/nsq", b);
    u += buf;
  }
  return u;
}

}  // namespace testing_support
