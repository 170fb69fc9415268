#pragma once

// JSON reports written by the command-line tool. A report is a pure function
// of (spec, flags, seed); wall-clock timing is included only on request.

#include <cstdint>
#include <string>

#include "chernlab/classify.hpp"
#include "chernlab/json_text.hpp"

namespace chernlab::report {

inline constexpr int kPointCap = 64;

struct RunInfo {
  std::string command;  // analyze, classify or verify
  int points = 0;
  std::uint64_t seed = 0;
  double tol = constants::kTolSymbolic;
  bool full = false;             // per-point dump without the cap
  std::optional<double> seconds;  // present only with --timing
};

/// {bidegree: [p, q], entries: [{I, J, re, im}]}, 1-based indices, nonzero entries only.
Json form_json(const tensor::FormValue& f);
Json spec_echo(const ManifoldSpec& spec);
Json conditions_json(const classify::ConditionReport& rep);
Json identities_json(const classify::IdentityTable& table);
Json points_json(const std::vector<classify::PointResiduals>& points, bool full);

/// Full document. `conditions` and `identities` may be null to omit the sections.
std::string render(const ManifoldSpec& spec, const classify::ConditionReport* conditions,
                   const classify::IdentityTable* identities, const RunInfo& run);

}  // namespace chernlab::report
