#pragma once

// The codifferential of the fundamental form, d*omega = -eps * starbar d starbar omega,
// evaluated exactly at a point by pushing metric 2-jets through the Hodge star.

#include <span>

#include "chernlab/forms.hpp"
#include "chernlab/geometry.hpp"

namespace chernlab::tensor {

/// d*omega as a (0,1)-jet of order 1 (value and first derivatives).
JetForm del_star_omega_jet(const PointGeometry& pg);

/// d*omega at the point, bidegree (0,1).
FormValue del_star_omega(const PointGeometry& pg);
FormValue del_star_omega(const Geometry& g, std::span<const cplx> p);

/// d d*omega at the point, bidegree (1,1).
FormValue del_del_star_omega(const PointGeometry& pg);

}  // namespace chernlab::tensor
