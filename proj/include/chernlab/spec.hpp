#pragma once

// ManifoldSpec: a Hermitian metric on a chart given by coefficient expressions,
// its fundamental domain and optional deck-group generators, plus the JSON
// document format used for specs.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "chernlab/expr.hpp"
#include "chernlab/linalg.hpp"

namespace chernlab {

enum class DomainKind { Annulus, Box, Torus };

struct Domain {
  DomainKind kind = DomainKind::Torus;
  double r_min = 0.0;  // annulus
  double r_max = 0.0;
  /// Box: per coordinate {re_lo, re_hi, im_lo, im_hi}.
  std::vector<std::array<double, 4>> rectangles;
  /// Torus: periods of (Re z1, Im z1, Re z2, ...); the fundamental cell is [0, P) per axis.
  std::vector<double> periods;

  /// Lebesgue measure of the fundamental domain in R^{2n}.
  double lebesgue_volume(int n) const;
};

const char* to_string(DomainKind kind);

struct ManifoldSpec {
  std::string name;
  int n = 0;
  /// Upper triangle h_{i jbar}, i <= j, row-major: (0,0), (0,1), ..., (1,1), ...
  std::vector<Expression> upper;
  Domain domain;
  std::vector<CMatrix> generators;

  /// h_{i jbar} for 0-based i, j; the lower triangle is conj of the upper one.
  Expression entry(int i, int j) const;
  Expression& upper_entry(int i, int j);
  const Expression& upper_entry(int i, int j) const;

  /// Flat identity metric with unit-period torus domain.
  static ManifoldSpec flat(int n);

  /// Structural checks: dimension range, entry count, index range, domain shape,
  /// generator shape. Throws ParseError.
  void validate() const;
};

/// Parses the JSON spec document. Throws ParseError (with line/column when the
/// location is known).
ManifoldSpec parse_metric_spec(std::string_view text);

/// Canonical JSON text of a spec (sorted metric keys, 17 significant digits, LF).
std::string to_json(const ManifoldSpec& spec);

}  // namespace chernlab
