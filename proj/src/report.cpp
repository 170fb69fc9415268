#include "chernlab/report.hpp"

#include "chernlab/spec.hpp"

namespace chernlab::report {

namespace {

Json indices_json(tensor::Mask m) {
  Json a = Json::array();
  for (int k : tensor::indices(m)) a.push_back(k + 1);
  return a;
}

Json point_json(const classify::Point& p) {
  Json a = Json::array();
  for (const cplx& z : p) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

}  // namespace

Json form_json(const tensor::FormValue& f) {
  Json entries = Json::array();
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] == cplx(0.0)) continue;
    Json e;
    e["I"] = indices_json(f.holo_mask(x));
    e["J"] = indices_json(f.anti_mask(x));
    e["re"] = f[x].real();
    e["im"] = f[x].imag();
    entries.push_back(e);
  }
  Json j;
  j["bidegree"] = Json::array({f.p(), f.q()});
  j["entries"] = entries;
  return j;
}

Json spec_echo(const ManifoldSpec& spec) {
  const Json doc = Json::parse(to_json(spec));
  Json j;
  j["name"] = spec.name;
  j["dimension"] = spec.n;
  j["domain"] = doc["domain"];
  j["generators"] = static_cast<int>(spec.generators.size());
  return j;
}

Json conditions_json(const classify::ConditionReport& rep) {
  Json conds = Json::array();
  for (const auto& c : rep.conditions) {
    Json r;
    r["name"] = c.name;
    r["max_residual"] = c.max_residual;
    r["verdict"] = classify::to_string(c.verdict);
    if (!c.flag.empty()) r["flag"] = c.flag;
    conds.push_back(r);
  }
  Json cls;
  cls["class"] = classify::to_string(rep.pf_class);
  cls["gauduchon_precondition"] = rep.gauduchon_precondition;
  if (rep.gauduchon_degree) {
    Json d;
    d["integral_s_dV"] = rep.gauduchon_degree->value;
    d["standard_error"] = rep.gauduchon_degree->standard_error;
    d["method"] = rep.quadrature;
    cls["gauduchon_degree"] = d;
  } else {
    cls["gauduchon_degree"] = nullptr;
  }
  cls["notes"] = rep.notes;
  Json j;
  j["samples"] = rep.samples;
  j["singular_points"] = rep.singular_points;
  j["conditions"] = conds;
  j["classification"] = cls;
  return j;
}

Json identities_json(const classify::IdentityTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["name"] = r.name;
    row["evaluated"] = r.evaluated;
    row["pf_conditional"] = r.pf_conditional;
    if (r.evaluated) {
      row["residual"] = r.residual;
    } else {
      row["residual"] = nullptr;
    }
    if (r.fitted_constant) row["fitted_constant"] = *r.fitted_constant;
    row["note"] = r.note;
    rows.push_back(row);
  }
  Json j;
  j["points_used"] = table.points_used;
  j["points_skipped"] = table.points_skipped;
  j["pf_holds"] = table.pf_holds;
  j["rows"] = rows;
  return j;
}

Json points_json(const std::vector<classify::PointResiduals>& points, bool full) {
  Json a = Json::array();
  const std::size_t cap = full ? points.size() : std::min(points.size(), static_cast<std::size_t>(kPointCap));
  for (std::size_t i = 0; i < cap; ++i) {
    const auto& p = points[i];
    Json r;
    r["index"] = static_cast<int>(i);
    r["z"] = point_json(p.point);
    r["singular"] = p.singular;
    if (!p.singular) {
      r["pf"] = p.pf;
      r["balanced"] = p.balanced;
      r["gauduchon"] = p.gauduchon;
      r["chern_flat"] = p.chern_flat;
      r["lck"] = p.lck;
      r["astheno"] = p.astheno;
      r["s"] = p.s;
      r["s_hat"] = p.s_hat;
    }
    a.push_back(r);
  }
  return a;
}

std::string render(const ManifoldSpec& spec, const classify::ConditionReport* conditions,
                   const classify::IdentityTable* identities, const RunInfo& run) {
  Json doc;
  doc["schema"] = constants::kReportSchema;
  doc["tool"] = "chernlab";
  doc["tool_version"] = constants::kToolVersion;
  doc["command"] = run.command;
  doc["constants_hash"] = constants::table_hash();
  doc["spec"] = spec_echo(spec);
  Json params;
  params["points"] = run.points;
  params["seed"] = run.seed;
  params["tol"] = run.tol;
  doc["parameters"] = params;
  if (conditions) {
    doc["report"] = conditions_json(*conditions);
    if (!conditions->points.empty()) {
      doc["points_total"] = static_cast<int>(conditions->points.size());
      doc["points"] = points_json(conditions->points, run.full);
    }
  }
  if (identities) doc["identities"] = identities_json(*identities);
  if (run.seconds) doc["timing"] = Json{{"seconds", *run.seconds}};
  return dump_json(doc);
}

}  // namespace chernlab::report
