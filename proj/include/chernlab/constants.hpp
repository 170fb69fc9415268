#pragma once

// The single table of scalar conventions. Every identity test and every report
// refers to these values; the report carries a hash of this table.
//
//   omega        = sum_{i,j} h_{i jbar} dz_i ^ dzbar_j          (no factor i or 2)
//   e_top        = dz_1 ^ ... ^ dz_n ^ dzbar_1 ^ ... ^ dzbar_n
//   vol          = i^n omega^n / n! = i^n (-1)^{n(n-1)/2} det(h) e_top
//                 (a real, positive form; equals 2^n det(h) times Lebesgue measure)
//   (dz_a, dz_b) = h^{a bbar}, coframe monomials of an h-unitary coframe orthonormal
//   a ^ *conj(b) = (a, b) vol                          (complex-linear Hodge star)
//   d*omega      = -eps * starbar d starbar omega,  starbar(a) = *(conj a)
//   c1           = (i / 2pi) tr Omega,   c2 = (1 / 8pi^2) (tr(Omega^Omega) - trOmega^trOmega)
//   dV           = det(h) * Lebesgue on R^{2n} for all quadrature

#include <cstdint>
#include <numbers>
#include <string>

namespace chernlab::constants {

/// Sign eps in d* = -eps * starbar d starbar. Pinned by weak-form adjointness on
/// a conformally perturbed flat torus (see the acceptance suite) and frozen.
inline constexpr int kCodifferentialSign = +1;

inline constexpr double kChernClass1Scale = 1.0 / (2.0 * std::numbers::pi);        // times i
inline constexpr double kChernClass2Scale = 1.0 / (8.0 * std::numbers::pi * std::numbers::pi);

/// Residual tolerance for quantities computed from exact symbolic derivatives.
inline constexpr double kTolSymbolic = 1e-8;
/// Tolerance against finite-difference oracles.
inline constexpr double kTolFiniteDifference = 1e-6;
/// Quadrature sign decisions use this many standard errors.
inline constexpr double kQuadratureSigmas = 3.0;
/// Smallest admissible Cholesky pivot of the metric.
inline constexpr double kTolPositiveDefinite = 1e-12;
/// Sample points closer than this to a chart singularity are rejected.
inline constexpr double kSingularityMargin = 1e-6;

/// Largest supported complex dimension (jet storage is sized for it).
inline constexpr int kMaxDimension = 4;

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Canonical text of the table above; hashed into every report.
std::string table_text();
/// FNV-1a 64-bit hash of table_text(), as 16 hex digits.
std::string table_hash();

}  // namespace chernlab::constants
