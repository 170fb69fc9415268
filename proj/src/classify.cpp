#include "chernlab/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "chernlab/codifferential.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/manifolds.hpp"
#include "chernlab/parallel.hpp"

namespace chernlab::classify {

using tensor::FormValue;
using tensor::Mask;

namespace {

double pf_defect(const curvature::Curvature4Tensor& theta, const CMatrix& h) {
  const int n = theta.dim();
  const CMatrix r1 = curvature::ricci(theta, h, 1).m;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += std::norm(theta(i, j, k, l) - r1(k, l) * h(i, j) / static_cast<double>(n));
  return std::sqrt(s) / (1.0 + theta.norm());
}

FormValue at_point(const tensor::FormField& f, const PointGeometry& pg) { return tensor::evaluate(f, pg.point()); }

double matrix_distance(const CMatrix& a, const CMatrix& b) {
  CMatrix d(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) d(i, j) = a(i, j) - b(i, j);
  return frobenius_norm(d);
}

CMatrix scaled(const CMatrix& a, cplx s) {
  CMatrix r = a;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) r(i, j) *= s;
  return r;
}

}  // namespace

double pf_residual(const PointGeometry& pg) { return pf_defect(curvature::chern_curvature(pg), pg.metric()); }

double pf_residual(const Geometry& g, std::span<const cplx> p) { return pf_residual(PointGeometry(g, p)); }

ManifoldSpec conformal_transform(const ManifoldSpec& spec, const Expression& u) {
  if (!expr::is_real_valued(u, spec.n)) throw std::invalid_argument("conformal factor is not real-valued");
  ManifoldSpec r = spec;
  const Expression f = exp(u);
  for (Expression& e : r.upper) e = f * e;
  return r;
}

double balanced_residual(const PointGeometry& pg) {
  const Geometry& g = pg.geometry();
  const double a = tensor::norm(at_point(g.del_omega_top(), pg));
  const double b = tensor::norm(at_point(g.delbar_omega_top(), pg));
  return std::hypot(a, b);
}

LckResult lck_residual(const PointGeometry& pg) {
  const int n = pg.dim();
  LckResult r;
  r.alpha = FormValue(n, 1, 0);
  if (n < 2) return r;
  const FormValue b = at_point(pg.geometry().del_omega(), pg);
  const FormValue w = tensor::fundamental_form(pg.metric());
  std::vector<FormValue> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) cols.push_back(tensor::wedge(tensor::monomial(n, Mask{1} << j, 0), w));
  CMatrix normal(n);
  std::vector<cplx> rhs(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const FormValue& ca = cols[static_cast<std::size_t>(a)];
    for (int c = 0; c < n; ++c) {
      const FormValue& cc = cols[static_cast<std::size_t>(c)];
      cplx s = 0.0;
      for (std::size_t x = 0; x < ca.size(); ++x) s += std::conj(ca[x]) * cc[x];
      normal(a, c) = s;
    }
    cplx s = 0.0;
    for (std::size_t x = 0; x < ca.size(); ++x) s += std::conj(ca[x]) * b[x];
    rhs[static_cast<std::size_t>(a)] = s;
  }
  const std::vector<cplx> alpha = solve(normal, rhs);
  FormValue fit(n, 2, 1);
  for (int j = 0; j < n; ++j) {
    r.alpha.at(Mask{1} << j, 0) = alpha[static_cast<std::size_t>(j)];
    fit += cols[static_cast<std::size_t>(j)] * alpha[static_cast<std::size_t>(j)];
  }
  r.residual = tensor::norm(b - fit);
  return r;
}

double astheno_residual(const PointGeometry& pg) {
  if (astheno_is_trivial(pg.dim())) return 0.0;
  return tensor::norm(at_point(pg.geometry().ddbar_omega_sub(), pg));
}

double gauduchon_residual(const PointGeometry& pg) {
  return tensor::norm(at_point(pg.geometry().ddbar_omega_top(), pg));
}

double chern_flat_residual(const PointGeometry& pg) { return curvature::chern_curvature(pg).norm(); }

const IdentityRow* IdentityTable::find(const std::string& name) const {
  for (const IdentityRow& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

enum Row {
  kNRho3,
  kPfDdstar,
  kGeneral,
  kGeneralLiteral,
  kTorsion,
  kCodiffTorsion,
  kDelbarEta,
  kLogDet,
  kScalarPf,
  kChernWeil,
  kRowCount
};

struct PointIdentities {
  bool singular = false;
  double pf = 0.0;
  std::array<double, kRowCount> residual{};
  CMatrix rho1, delbar_eta;  // for the constant fit
};

PointIdentities identities_at(const Geometry& g, std::span<const cplx> p) {
  PointIdentities out;
  const PointGeometry pg(g, p);
  const int n = g.dim();
  const double dn = n;
  const CMatrix& h = pg.metric();
  const auto theta = curvature::chern_curvature(pg);
  const CMatrix r1 = curvature::ricci(theta, h, 1).m;
  const CMatrix r3 = curvature::ricci(theta, h, 3).m;
  const CMatrix dd = tensor::coefficient_matrix(tensor::del_del_star_omega(pg));
  out.pf = pf_defect(theta, h);
  out.rho1 = r1;

  auto& r = out.residual;
  r[kNRho3] = matrix_distance(scaled(r3, dn), r1);
  r[kPfDdstar] = matrix_distance(scaled(r1, (dn - 1.0) / dn), dd);
  const CMatrix r3h = adjoint(r3);
  CMatrix gen(n), lit(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      gen(a, b) = r3h(a, b) - r1(a, b) + dd(a, b);
      lit(a, b) = r3(a, b) - r1(a, b) + dd(a, b);
    }
  r[kGeneral] = frobenius_norm(gen);
  r[kGeneralLiteral] = frobenius_norm(lit);
  r[kLogDet] = matrix_distance(r1, curvature::ricci_from_log_det(g, p));
  const auto s = curvature::scalar_curvatures(theta, h);
  r[kScalarPf] = std::abs(s.s - dn * s.s_hat);
  if (n >= 2) {
    const auto t = curvature::torsion(pg);
    const FormValue wtop = tensor::evaluate(g.omega_power(n - 1), p);
    const FormValue lhs = tensor::evaluate(g.del_omega_top(), p);
    r[kTorsion] = tensor::norm(lhs - tensor::wedge(t.eta, wtop) * cplx(dn - 1.0));
    const FormValue ds = tensor::del_star_omega(pg);
    r[kCodiffTorsion] = tensor::norm(ds + tensor::conj_form(t.eta) * cplx(dn - 1.0));
    out.delbar_eta = tensor::coefficient_matrix(curvature::delbar_eta(pg));
    const auto cw = curvature::chern_weil_forms(theta, h);
    r[kChernWeil] = tensor::norm(cw.c2 * cplx(2.0 * dn) - tensor::wedge(cw.c1, cw.c1) * cplx(dn - 1.0));
  }
  return out;
}

}  // namespace

IdentityTable identity_suite(const Geometry& g, std::span<const Point> points, double tol) {
  const int n = g.dim();
  std::vector<PointIdentities> per(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      per[i] = identities_at(g, points[i]);
    } catch (const ChartSingularity&) {
      per[i].singular = true;
    } catch (const SingularMetric&) {
      per[i].singular = true;
    }
  });

  IdentityTable table;
  std::array<double, kRowCount> worst{};
  double fit_num = 0.0, fit_den = 0.0;
  bool pf = true;
  for (const PointIdentities& q : per) {
    if (q.singular) {
      ++table.points_skipped;
      continue;
    }
    ++table.points_used;
    pf = pf && q.pf < tol;
    for (int k = 0; k < kRowCount; ++k) worst[static_cast<std::size_t>(k)] = std::max(worst[static_cast<std::size_t>(k)], q.residual[static_cast<std::size_t>(k)]);
    if (n >= 2) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          fit_num += (std::conj(q.rho1(a, b)) * q.delbar_eta(a, b)).real();
          fit_den += std::norm(q.rho1(a, b));
        }
    }
  }
  table.pf_holds = pf && table.points_used > 0;

  struct RowInfo {
    Row id;
    const char* name;
    bool pf_conditional;
    int min_dim;
    const char* note;
  };
  static const RowInfo info[] = {
      {kNRho3, "n_rho3_eq_rho1", true, 1, "n rho3 - rho1"},
      {kPfDdstar, "pf_rho1_eq_ddstar", true, 1, "(n-1)/n rho1 - d d*omega"},
      {kGeneral, "general_rho3", false, 1,
       "rho3^H - rho1 + d d*omega, with rho3^H the conjugate transpose of the kind-3 matrix (the kind-3 contraction "
       "in the convention where the first index pair is the direction slot)"},
      {kGeneralLiteral, "general_rho3_literal", false, 1,
       "diagnostic: rho3 - rho1 + d d*omega with the kind-3 matrix as defined; vanishes only when rho3 is Hermitian"},
      {kTorsion, "torsion_relation", false, 2, "d omega^{n-1} - (n-1) eta ^ omega^{n-1}"},
      {kCodiffTorsion, "codifferential_torsion", false, 2, "d*omega + (n-1) conj(eta)"},
      {kDelbarEta, "delbar_eta_fit", false, 2, "delbar eta - c rho1, c fitted over all points"},
      {kLogDet, "first_ricci_logdet", false, 1, "rho1 + d dbar log det h"},
      {kScalarPf, "scalar_pf", true, 1, "s - n s_hat"},
      {kChernWeil, "chern_weil_pf", true, 2, "2n c2 - (n-1) c1 ^ c1"},
  };
  std::optional<double> c;
  // No fit when rho1 vanishes to within tol in the RMS sense (Chern-Ricci flat metrics).
  if (fit_den > tol * tol * table.points_used) c = fit_num / fit_den;
  for (const RowInfo& ri : info) {
    IdentityRow row;
    row.name = ri.name;
    row.pf_conditional = ri.pf_conditional;
    row.note = ri.note;
    row.evaluated = table.points_used > 0 && n >= ri.min_dim && (!ri.pf_conditional || table.pf_holds);
    if (row.evaluated) {
      if (ri.id == kDelbarEta) {
        row.fitted_constant = c;
        double m = 0.0;
        for (const PointIdentities& q : per) {
          if (q.singular) continue;
          m = std::max(m, matrix_distance(q.delbar_eta, scaled(q.rho1, c.value_or(0.0))));
        }
        row.residual = m;
      } else {
        row.residual = worst[static_cast<std::size_t>(ri.id)];
      }
    } else if (n < ri.min_dim) {
      row.note = "not defined for n = 1";
    } else if (ri.pf_conditional && table.points_used > 0) {
      row.note = "skipped: metric is not projectively flat at every point";
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Singular:
      return "singular";
    case Verdict::Trivial:
      return "trivial";
  }
  return "?";
}

const char* to_string(PfClass c) {
  switch (c) {
    case PfClass::Positive:
      return "positive";
    case PfClass::Zero:
      return "zero";
    case PfClass::NotProjectivelyFlat:
      return "not-projectively-flat";
    case PfClass::InconsistentWithTheory:
      return "inconsistent-with-theory";
  }
  return "?";
}

const ConditionRow* ConditionReport::find(const std::string& name) const {
  for (const ConditionRow& r : conditions)
    if (r.name == name) return &r;
  return nullptr;
}

ConditionReport classify_pf(const Geometry& g, const ClassifyOptions& options) {
  if (options.samples < 1) throw std::invalid_argument("classify needs at least one sample");
  const int n = g.dim();
  ConditionReport rep;
  rep.samples = options.samples;
  const std::vector<Point> pts = manifolds::sample_domain(g.spec().domain, n, options.samples, options.seed);
  rep.points.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    PointResiduals& r = rep.points[i];
    r.point = pts[i];
    try {
      const PointGeometry pg(g, pts[i]);
      const auto theta = curvature::chern_curvature(pg);
      r.pf = pf_defect(theta, pg.metric());
      r.chern_flat = theta.norm();
      r.balanced = balanced_residual(pg);
      r.gauduchon = gauduchon_residual(pg);
      r.lck = lck_residual(pg).residual;
      r.astheno = astheno_residual(pg);
      const auto s = curvature::scalar_curvatures(theta, pg.metric());
      r.s = s.s;
      r.s_hat = s.s_hat;
    } catch (const ChartSingularity&) {
      r.singular = true;
    } catch (const SingularMetric&) {
      r.singular = true;
    }
  });
  for (const PointResiduals& r : rep.points) rep.singular_points += r.singular ? 1 : 0;
  const bool any = rep.singular_points < static_cast<int>(rep.points.size());

  auto condition = [&](const char* name, double PointResiduals::*field) {
    ConditionRow row;
    row.name = name;
    for (const PointResiduals& r : rep.points)
      if (!r.singular) row.max_residual = std::max(row.max_residual, r.*field);
    if (!any) {
      row.verdict = Verdict::Singular;
      row.flag = "every sample point is singular";
    } else {
      row.verdict = row.max_residual < options.tol ? Verdict::Holds : Verdict::Fails;
    }
    if (n == 1 && any) {
      row.verdict = Verdict::Trivial;
      row.flag = "n = 1: every Hermitian metric on a curve satisfies this condition";
    }
    rep.conditions.push_back(row);
    return row;
  };
  const ConditionRow pf = condition("projectively_flat", &PointResiduals::pf);
  const ConditionRow balanced = condition("balanced", &PointResiduals::balanced);
  const ConditionRow gauduchon = condition("gauduchon", &PointResiduals::gauduchon);
  condition("chern_flat", &PointResiduals::chern_flat);
  condition("lck", &PointResiduals::lck);
  condition("astheno_kahler", &PointResiduals::astheno);
  if (astheno_is_trivial(n) && any) {
    rep.conditions.back().verdict = Verdict::Trivial;
    rep.conditions.back().flag = "n <= 2: every Hermitian metric is astheno-Kahler";
  }

  if (options.identities) {
    rep.identities = identity_suite(g, pts, options.tol);
  }
  if (!any) throw SingularMetric("every sample point is singular");

  auto holds = [&](const ConditionRow& r) { return r.verdict == Verdict::Holds || r.verdict == Verdict::Trivial; };
  if (!holds(pf)) {
    rep.pf_class = PfClass::NotProjectivelyFlat;
    return rep;
  }
  rep.gauduchon_precondition = holds(gauduchon);
  if (!rep.gauduchon_precondition)
    rep.notes.push_back("the given representative is not Gauduchon, so the sign of the integral of s does not determine the degree");

  const manifolds::VectorField field = [](const PointGeometry& pg) {
    const auto s = curvature::scalar_curvatures(curvature::chern_curvature(pg), pg.metric());
    return std::vector<double>{s.s, 1.0};
  };
  const DomainKind kind = g.spec().domain.kind;
  std::vector<manifolds::Integral> q;
  if (kind != DomainKind::Annulus && n <= 2) {
    q = manifolds::integrate_grid(field, g, options.grid_resolution);
    rep.quadrature = "grid";
  } else {
    q = manifolds::integrate(field, g, options.quadrature_points, options.seed);
    rep.quadrature = "monte-carlo";
  }
  rep.gauduchon_degree = Estimate{q[0].value, q[0].standard_error};
  const double threshold = std::max(constants::kQuadratureSigmas * q[0].standard_error, options.tol * std::abs(q[1].value));
  const double est = q[0].value;
  if (!rep.gauduchon_precondition) {
    // Without a Gauduchon representative the sign of the integral says nothing about the degree.
    rep.pf_class = PfClass::InconsistentWithTheory;
  } else if (est > threshold) {
    rep.pf_class = PfClass::Positive;
  } else if (est >= -threshold && holds(balanced)) {
    rep.pf_class = PfClass::Zero;
  } else {
    rep.pf_class = PfClass::InconsistentWithTheory;
    rep.notes.push_back(est < -threshold ? "negative degree estimate: no negative projectively flat metric exists"
                                         : "degree estimate is zero but the metric is not balanced");
  }
  return rep;
}

}  // namespace chernlab::classify
