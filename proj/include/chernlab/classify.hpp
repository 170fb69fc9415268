#pragma once

// Condition residuals, conformal change, the identity suite and the
// projectively-flat trichotomy.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chernlab/curvature.hpp"
#include "chernlab/geometry.hpp"

namespace chernlab::classify {

using Point = std::vector<cplx>;

/// ||Theta - (1/n) Theta^(1) (x) h||_F / (1 + ||Theta||_F).
double pf_residual(const PointGeometry& pg);
double pf_residual(const Geometry& g, std::span<const cplx> p);

/// exp(u) h. Throws std::invalid_argument when u is not real-valued (neither
/// structurally self-conjugate nor real at sampled points).
ManifoldSpec conformal_transform(const ManifoldSpec& spec, const Expression& u);

/// ||d(omega^{n-1})|| (coefficient norm of del and delbar parts together).
double balanced_residual(const PointGeometry& pg);

struct LckResult {
  double residual = 0.0;
  tensor::FormValue alpha;  // (1,0)
};

/// Least squares fit of del omega = alpha ^ omega via the normal equations.
/// For n = 1 del omega vanishes and the result is (0, 0). Throws SingularMetric
/// on degenerate normal equations.
LckResult lck_residual(const PointGeometry& pg);

/// ||del delbar(omega^{n-2})||; 0 for n <= 2 (see astheno_is_trivial).
double astheno_residual(const PointGeometry& pg);
inline bool astheno_is_trivial(int n) { return n <= 2; }

/// ||del delbar(omega^{n-1})||.
double gauduchon_residual(const PointGeometry& pg);

/// ||Theta||_F.
double chern_flat_residual(const PointGeometry& pg);

struct IdentityRow {
  std::string name;
  double residual = 0.0;                 // max over evaluated points
  std::optional<double> fitted_constant;  // delbar-eta diagnostic only
  bool pf_conditional = false;
  bool evaluated = false;
  std::string note;
};

struct IdentityTable {
  std::vector<IdentityRow> rows;
  int points_used = 0;
  int points_skipped = 0;  // singular points
  bool pf_holds = false;   // pf_residual < tol at every used point

  const IdentityRow* find(const std::string& name) const;
};

/// Evaluates every identity at `points`; PF-conditional rows only when the
/// metric is projectively flat at all of them.
IdentityTable identity_suite(const Geometry& g, std::span<const Point> points, double tol = constants::kTolSymbolic);

enum class Verdict { Holds, Fails, Singular, Trivial };
const char* to_string(Verdict v);

struct ConditionRow {
  std::string name;
  double max_residual = 0.0;
  Verdict verdict = Verdict::Holds;
  std::string flag;
};

enum class PfClass { Positive, Zero, NotProjectivelyFlat, InconsistentWithTheory };
const char* to_string(PfClass c);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Residuals at one sampled point, in sample order.
struct PointResiduals {
  Point point;
  bool singular = false;
  double pf = 0.0;
  double balanced = 0.0;
  double gauduchon = 0.0;
  double chern_flat = 0.0;
  double lck = 0.0;
  double astheno = 0.0;
  double s = 0.0;
  double s_hat = 0.0;
};

struct ConditionReport {
  std::vector<ConditionRow> conditions;
  std::vector<PointResiduals> points;
  PfClass pf_class = PfClass::NotProjectivelyFlat;
  std::optional<Estimate> gauduchon_degree;
  std::string quadrature;  // "monte-carlo" or "grid"
  bool gauduchon_precondition = false;
  IdentityTable identities;
  int samples = 0;
  int singular_points = 0;
  std::vector<std::string> notes;

  const ConditionRow* find(const std::string& name) const;
};

struct ClassifyOptions {
  int samples = 200;
  std::uint64_t seed = 1;
  double tol = constants::kTolSymbolic;
  /// Quadrature points for the degree integral (Monte Carlo) or per-axis grid
  /// resolution for torus and box domains in dimension <= 2.
  int quadrature_points = 4000;
  int grid_resolution = 8;
  bool identities = false;
};

/// Per-point condition residuals over sampled points plus the trichotomy.
/// A projectively flat metric whose representative fails the Gauduchon
/// condition is reported as inconsistent-with-theory (the integral is still
/// estimated and reported), as is a zero estimate for a non-balanced metric.
ConditionReport classify_pf(const Geometry& g, const ClassifyOptions& options);

}  // namespace chernlab::classify
