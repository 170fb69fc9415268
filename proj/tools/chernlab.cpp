// chernlab command-line tool.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 singular metric, 3 parse error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chernlab/classify.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/manifolds.hpp"
#include "chernlab/report.hpp"
#include "chernlab/spec.hpp"

namespace {

using namespace chernlab;

enum Exit { kOk = 0, kUsage = 1, kSingular = 2, kParse = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A readable file is parsed as a spec document; otherwise a builtin name with default parameters.
ManifoldSpec load_spec(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw IoError("cannot read " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_metric_spec(ss.str());
  }
  for (const auto& name : manifolds::builtin_names()) {
    if (name == arg) {
      manifolds::BuiltinParams params;
      if (name == "iwasawa") params.n = 3;
      return manifolds::builtin(name, params);
    }
  }
  throw IoError("no such spec file or builtin: " + arg);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

void summarize(const classify::ConditionReport& rep) {
  for (const auto& c : rep.conditions)
    std::fprintf(stderr, "%-18s %-8s max residual %.3e\n", c.name.c_str(), classify::to_string(c.verdict), c.max_residual);
  std::fprintf(stderr, "class: %s", classify::to_string(rep.pf_class));
  if (rep.gauduchon_degree)
    std::fprintf(stderr, " (integral of s dV = %.6g +- %.2g, %s)", rep.gauduchon_degree->value,
                 rep.gauduchon_degree->standard_error, rep.quadrature.c_str());
  std::fprintf(stderr, "\n");
}

void summarize(const classify::IdentityTable& t) {
  for (const auto& r : t.rows) {
    if (r.evaluated)
      std::fprintf(stderr, "%-24s %.3e\n", r.name.c_str(), r.residual);
    else
      std::fprintf(stderr, "%-24s skipped\n", r.name.c_str());
  }
}

struct Common {
  std::string spec;
  int points = 100;
  std::uint64_t seed = 1;
  double tol = constants::kTolSymbolic;
  std::string out;
  bool full = false;
  bool timing = false;
};

int run(int argc, char** argv) {
  CLI::App app{"Chern curvature invariants and projectively flat classification of Hermitian metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", constants::kToolVersion);

  Common an;
  auto* analyze = app.add_subcommand("analyze", "All condition checks, the identity suite and the classification");
  analyze->add_option("spec", an.spec, "Spec file or builtin name")->required();
  analyze->add_option("--points", an.points, "Sample points")->check(CLI::PositiveNumber);
  analyze->add_option("--seed", an.seed, "Random seed");
  analyze->add_option("--tol", an.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  analyze->add_option("--out", an.out, "Report path (default: standard output)");
  analyze->add_flag("--full", an.full, "Dump every sample point");
  analyze->add_flag("--timing", an.timing, "Include wall-clock time (breaks byte determinism)");

  Common cl;
  cl.points = 200;
  auto* classify_cmd = app.add_subcommand("classify", "Projectively flat classification only");
  classify_cmd->add_option("spec", cl.spec, "Spec file or builtin name")->required();
  classify_cmd->add_option("--samples", cl.points, "Sample points")->check(CLI::PositiveNumber);
  classify_cmd->add_option("--seed", cl.seed, "Random seed");
  classify_cmd->add_option("--out", cl.out, "Report path (default: standard output)");

  Common ve;
  auto* verify = app.add_subcommand("verify", "Identity suite only");
  verify->add_option("spec", ve.spec, "Spec file or builtin name")->required();
  verify->add_option("--points", ve.points, "Sample points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", ve.seed, "Random seed");
  verify->add_option("--tol", ve.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--out", ve.out, "Report path (default: standard output)");

  std::string name, out;
  manifolds::BuiltinParams params;
  bool n_given = false;
  auto* builtin = app.add_subcommand("builtin", "Emit a builtin spec document");
  builtin->add_option("name", name, "hopf_boothby, flat_torus, iwasawa or conformal_torus")->required();
  builtin->add_option("--n", params.n, "Complex dimension")->each([&](const std::string&) { n_given = true; });
  builtin->add_option("--rho0", params.rho0, "Hopf contraction factor in (0, 1)");
  builtin->add_option("--lambda", params.lambda, "Hopf rotation angles in turns, one per coordinate");
  builtin->add_option("--u", params.u, "Conformal factor expression for conformal_torus");
  builtin->add_option("--out", out, "Spec path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*builtin) {
    if (name == "iwasawa" && !n_given) params.n = 3;
    write_output(out, to_json(manifolds::builtin(name, params)));
    return kOk;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  if (*analyze || *classify_cmd) {
    const Common& c = *analyze ? an : cl;
    const ManifoldSpec spec = load_spec(c.spec);
    const Geometry g(spec);
    classify::ClassifyOptions options;
    options.samples = c.points;
    options.seed = c.seed;
    options.tol = c.tol;
    options.identities = static_cast<bool>(*analyze);
    classify::ConditionReport rep = classify::classify_pf(g, options);
    report::RunInfo info{*analyze ? "analyze" : "classify", c.points, c.seed, c.tol, c.full, std::nullopt};
    if (c.timing) info.seconds = elapsed();
    if (!*analyze) rep.points.clear();
    write_output(c.out, report::render(spec, &rep, *analyze ? &rep.identities : nullptr, info));
    if (!c.out.empty()) summarize(rep);
    return kOk;
  }

  const ManifoldSpec spec = load_spec(ve.spec);
  const Geometry g(spec);
  const auto pts = manifolds::sample_domain(spec.domain, spec.n, ve.points, ve.seed);
  const classify::IdentityTable table = classify::identity_suite(g, pts, ve.tol);
  if (table.points_used == 0) throw SingularMetric("every sample point is singular");
  const report::RunInfo info{"verify", ve.points, ve.seed, ve.tol, false, std::nullopt};
  write_output(ve.out, report::render(spec, nullptr, &table, info));
  if (!ve.out.empty()) summarize(table);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParse;
  } catch (const SingularMetric& e) {
    std::fprintf(stderr, "error: singular metric: %s\n", e.what());
    return kSingular;
  } catch (const ChartSingularity& e) {
    std::fprintf(stderr, "error: singular metric: %s\n", e.what());
    return kSingular;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
