#pragma once

// Builtin geometries, fundamental-domain sampling, deck-group invariance and
// quadrature of scalar fields against dV = det(h) * Lebesgue.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "chernlab/geometry.hpp"
#include "chernlab/spec.hpp"

namespace chernlab::manifolds {

using Point = std::vector<cplx>;

struct BuiltinParams {
  int n = 2;
  double rho0 = 0.5;            // hopf_boothby
  std::vector<double> lambda;   // hopf_boothby, rotation angles (turns); empty = zeros
  std::string u;                // conformal_torus; empty = default periodic factor
};

/// hopf_boothby, flat_torus, iwasawa (n = 3), conformal_torus. Throws
/// std::invalid_argument on an unknown name or invalid parameters.
ManifoldSpec builtin(const std::string& name, const BuiltinParams& params = {});
const std::vector<std::string>& builtin_names();

/// Deterministic generator: std::mt19937_64 (whose output sequence the standard
/// fixes) with 53-bit uniforms and Box-Muller normals, so streams are identical
/// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct InvarianceResult {
  double residual = 0.0;  // max ||A^T h(A p) conj(A) - h(p)||_F
  int checked = 0;
  int resampled = 0;      // images that hit a chart singularity
};

/// Pullback residual for every generator at sampled points. For a linear map
/// q = A p the pullback of omega has matrix A^T h(A p) conj(A) (this is the
/// A^H h A of the column convention). Specs without generators give 0.
InvarianceResult group_invariance(const ManifoldSpec& spec, int samples = 64, std::uint64_t seed = 7);
double group_invariance_check(const ManifoldSpec& spec, int samples = 64, std::uint64_t seed = 7);

struct SampleSet {
  std::vector<Point> points;
  /// Reciprocal sampling density: mean(f * weight) estimates the Lebesgue integral of f.
  std::vector<double> weights;
};

/// Pseudorandom points of the fundamental domain. Annulus: uniform direction,
/// log-uniform radius in (r_min, r_max] (the measure invariant under z -> rho0 z).
/// Box and torus: uniform. Throws std::invalid_argument on an empty domain.
SampleSet sample_weighted(const Domain& domain, int n, int count, std::uint64_t seed);
std::vector<Point> sample_domain(const Domain& domain, int n, int count, std::uint64_t seed);

/// A field returning several values per point; integrating them together keeps
/// the estimates paired.
using VectorField = std::function<std::vector<double>(const PointGeometry&)>;
using Field = std::function<double(const PointGeometry&)>;

struct Integral {
  double value = 0.0;
  double standard_error = 0.0;
  int points = 0;
  int rejected = 0;  // singular sample points (contribute zero)
  std::string method;
};

/// Monte Carlo estimate of the integrals of the components against dV, with
/// standard errors. Throws QuadratureError on a non-finite field value or when
/// a standard error exceeds `precision`.
std::vector<Integral> integrate(const VectorField& field, const Geometry& g, int count, std::uint64_t seed,
                                double precision = std::numeric_limits<double>::infinity());
Integral integrate(const Field& field, const Geometry& g, int count, std::uint64_t seed,
                   double precision = std::numeric_limits<double>::infinity());

/// Tensor midpoint rule on torus and box domains at resolutions N and 2N per real
/// axis. Value: Richardson combination (4 Q_2N - Q_N) / 3; error: |Q_2N - Q_N|.
/// Throws QuadratureError at singular grid points, std::invalid_argument for annulus domains.
std::vector<Integral> integrate_grid(const VectorField& field, const Geometry& g, int resolution);

}  // namespace chernlab::manifolds
