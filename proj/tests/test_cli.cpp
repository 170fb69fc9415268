#include <filesystem>

#include "cli_support.hpp"
#include "doctest.h"
#include "json.hpp"

using testing_support::run_cli;
using json = nlohmann::ordered_json;

namespace {

std::string fixture(const std::string& name) { return (std::filesystem::path(CHERNLAB_FIXTURES) / name).string(); }

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("corrupted inputs honor the exit-code contract") {
  const auto corpus = testing_support::corrupt_fixtures();
  REQUIRE(corpus.size() == 20);
  for (const auto& f : corpus) {
    for (const char* cmd : {"analyze", "classify", "verify"}) {
      const auto r = run_cli({cmd, f.path, "--seed", "2"});
      CHECK_MESSAGE(r.exit_code == f.expected_exit, std::string(cmd) << " " << f.path << ": " << r.err);
      CHECK_MESSAGE(r.out.empty(), f.path);
      CHECK(r.err.rfind("error: ", 0) == 0);
    }
  }
}

TEST_CASE("usage and I/O errors exit 1") {
  CHECK(run_cli({"analyze", fixture("does_not_exist.json")}).exit_code == 1);
  CHECK(run_cli({"frobnicate"}).exit_code == 1);
  CHECK(run_cli({}).exit_code == 1);
  CHECK(run_cli({"analyze", "flat_torus", "--points", "0"}).exit_code == 1);
  CHECK(run_cli({"analyze", "flat_torus", "--bogus"}).exit_code == 1);
  CHECK(run_cli({"builtin", "klein_bottle"}).exit_code == 1);
  CHECK(run_cli({"analyze", "flat_torus", "--out", "/nonexistent_dir/x.json"}).exit_code == 1);
  CHECK(run_cli({"--help"}).exit_code == 0);
  CHECK(run_cli({"--version"}).out.find("0.1.0") != std::string::npos);
}

TEST_CASE("reports are byte-identical for identical invocations") {
  const std::vector<std::string> args{"analyze", "hopf_boothby", "--points", "20", "--seed", "3"};
  const auto a = run_cli(args), b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find('\r') == std::string::npos);
  CHECK(run_cli({"analyze", "hopf_boothby", "--points", "20", "--seed", "4"}).out != a.out);
  const auto c = run_cli({"classify", "iwasawa", "--samples", "20", "--seed", "3"});
  CHECK(c.out == run_cli({"classify", "iwasawa", "--samples", "20", "--seed", "3"}).out);
  const auto v = run_cli({"verify", "hopf_boothby", "--points", "20"});
  CHECK(v.out == run_cli({"verify", "hopf_boothby", "--points", "20"}).out);
}

TEST_CASE("analyze report contents") {
  const auto r = run_cli({"analyze", "hopf_boothby", "--points", "30"});
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "analyze");
  CHECK(j["spec"]["dimension"] == 2);
  CHECK(j["report"]["classification"]["class"] == "positive");
  bool pf_holds = false;
  for (const auto& c : j["report"]["conditions"])
    if (c["name"] == "projectively_flat") pf_holds = c["verdict"] == "holds";
  CHECK(pf_holds);
  CHECK(j["points_total"] == 30);
  CHECK(j["points"].size() == 30);
  CHECK_FALSE(j.contains("timing"));
  CHECK(j["identities"]["rows"].size() > 5);

  const json flat = json::parse(run_cli({"analyze", "flat_torus", "--points", "10"}).out);
  CHECK(flat["report"]["classification"]["class"] == "zero");
  for (const auto& c : flat["report"]["conditions"]) CHECK(c["max_residual"] == 0.0);

  // The per-point dump is capped unless --full is given.
  CHECK(json::parse(run_cli({"analyze", "flat_torus", "--points", "80"}).out)["points"].size() == 64);
  CHECK(json::parse(run_cli({"analyze", "flat_torus", "--points", "80", "--full"}).out)["points"].size() == 80);
  CHECK(json::parse(run_cli({"analyze", "flat_torus", "--points", "5", "--timing"}).out).contains("timing"));
}

TEST_CASE("classify examples") {
  auto cls = [](const std::string& spec) {
    const auto r = run_cli({"classify", spec, "--samples", "30"});
    REQUIRE(r.exit_code == 0);
    return json::parse(r.out)["report"]["classification"]["class"].get<std::string>();
  };
  CHECK(cls("hopf_boothby") == "positive");
  CHECK(cls("iwasawa") == "zero");
  CHECK(cls(fixture("bumped_torus.json")) == "not-projectively-flat");
  CHECK(cls(fixture("reference_torus.json")) == "zero");
  const json j = json::parse(run_cli({"classify", "hopf_boothby", "--samples", "10"}).out);
  CHECK_FALSE(j.contains("identities"));
}

TEST_CASE("builtin emission round-trips") {
  for (const std::string name : {"hopf_boothby", "flat_torus", "iwasawa", "conformal_torus"}) {
    const auto path = temp_file("chernlab_builtin_" + name + ".json");
    const auto emitted = run_cli({"builtin", name, "--out", path.string()});
    REQUIRE(emitted.exit_code == 0);
    CHECK(testing_support::slurp(path) == run_cli({"builtin", name}).out);
    // A spec file and the builtin name yield the same report.
    CHECK(run_cli({"analyze", path.string(), "--points", "8"}).out == run_cli({"analyze", name, "--points", "8"}).out);
    std::filesystem::remove(path);
  }
  const auto b3 = run_cli({"builtin", "hopf_boothby", "--n", "3", "--rho0", "0.25"});
  REQUIRE(b3.exit_code == 0);
  const json j = json::parse(b3.out);
  CHECK(j["dimension"] == 3);
  CHECK(j["domain"]["r_min"] == 0.25);
  CHECK(run_cli({"builtin", "iwasawa", "--n", "2"}).exit_code == 1);
}

TEST_CASE("out writes the report and a summary") {
  const auto path = temp_file("chernlab_cli_report.json");
  const auto r = run_cli({"analyze", "hopf_boothby", "--points", "10", "--out", path.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("class: positive") != std::string::npos);
  CHECK(testing_support::slurp(path) == run_cli({"analyze", "hopf_boothby", "--points", "10"}).out);
  std::filesystem::remove(path);
}
