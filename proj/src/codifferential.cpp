#include "chernlab/codifferential.hpp"

namespace chernlab::tensor {

JetForm del_star_omega_jet(const PointGeometry& pg) {
  const FormMetric<Jet>& g = pg.jet_metric();
  const JetForm omega = fundamental_form(pg.metric_jet());
  const JetForm inner = partial(hodge_star_bar(omega, g));
  return hodge_star_bar(inner, g) * cplx(-constants::kCodifferentialSign);
}

FormValue del_star_omega(const PointGeometry& pg) { return values(del_star_omega_jet(pg)); }

FormValue del_star_omega(const Geometry& g, std::span<const cplx> p) { return del_star_omega(PointGeometry(g, p)); }

FormValue del_del_star_omega(const PointGeometry& pg) { return values(partial(del_star_omega_jet(pg))); }

}  // namespace chernlab::tensor
