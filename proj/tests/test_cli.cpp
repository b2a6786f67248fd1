#include "doctest.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "subdiff/cli.hpp"
#include "subdiff/io.hpp"
#include "subdiff/real.hpp"

using namespace subdiff;
using nlohmann::json;

namespace {

// Every CLI run re-binds the process-wide working precision; restore the
// library default so later tests are unaffected.
struct PrecisionGuard {
  ~PrecisionGuard() { set_precision_bits(kDefaultPrecisionBits); }
};

json load_json(const std::string& path) {
  return json::parse(read_text_file(path));
}

}  // namespace

TEST_CASE("version flag and argument errors") {
  PrecisionGuard guard;
  CHECK(run_cli({"--version"}) == kExitOk);
  CHECK(run_cli({}) == kExitConfig);
  CHECK(run_cli({"bogus-subcommand"}) == kExitConfig);
  // --seed is mandatory for the simulation command.
  CHECK(run_cli({"spade", "--out", "test_tmp/cli_noseed"}) == kExitConfig);
}

TEST_CASE("validation failures use the config exit code") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_bad";
  CHECK(run_cli({"bound", "--mu", "0", "--out", dir}) == kExitConfig);
  CHECK(run_cli({"bound", "--mu", "1", "--precision-bits", "32", "--out",
                 dir}) == kExitConfig);
  CHECK(run_cli({"bound", "--mu", "1", "--delta", "-0.1", "--out", dir}) ==
        kExitConfig);
  CHECK(run_cli({"bound", "--mu", "1", "--p0", "no_such_family", "--out",
                 dir}) == kExitConfig);
  CHECK(run_cli({"spade", "--seed", "1", "--m", "1000", "--eps", "0.01",
                 "--n", "11", "--out", dir}) == kExitConfig);
  // The hard-aperture psf is refused without the explicit override.
  CHECK(run_cli({"direct", "--psf", "sinc2", "--mu", "1", "--out", dir}) ==
        kExitConfig);
}

TEST_CASE("bound command writes a report and a hashed manifest") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_bound";
  CHECK(run_cli({"bound", "--mu", "2", "--delta", "0.1", "--out", dir}) ==
        kExitOk);

  const json report = load_json(dir + "/bound.json");
  CHECK(report.at("mu").get<int>() == 2);
  CHECK(report.at("delta").get<double>() == doctest::Approx(0.1));
  // Frozen from an independent high-precision implementation.
  CHECK(report.at("gram").get<double>() ==
        doctest::Approx(0.000166661496643694).epsilon(1e-9));
  CHECK(report.at("bound_lower").get<double>() > 0.0);
  CHECK(report.at("precision_bits").get<int>() == 256);

  const json manifest = load_json(dir + "/manifest.json");
  CHECK(manifest.at("tool_version").get<std::string>() == kToolVersion);
  CHECK(manifest.at("command").get<std::string>() == "bound");
  CHECK(manifest.at("precision_bits").get<int>() == 256);
  CHECK(manifest.at("timing_ms").get<long>() >= 0);
  bool saw_bound = false;
  for (const auto& out : manifest.at("outputs")) {
    const std::string name = out.at("path").get<std::string>();
    const std::string recorded = out.at("fnv1a64").get<std::string>();
    CHECK(recorded == file_hash_hex(dir + "/" + name));
    if (name == "bound.json") saw_bound = true;
  }
  CHECK(saw_bound);
}

TEST_CASE("precision environment variable and flag precedence") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_env";
  REQUIRE(setenv(kPrecisionEnvVar, "128", 1) == 0);
  CHECK(run_cli({"bound", "--mu", "1", "--out", dir}) == kExitOk);
  CHECK(load_json(dir + "/manifest.json").at("precision_bits").get<int>() ==
        128);
  // An explicit flag wins over the environment.
  CHECK(run_cli({"bound", "--mu", "1", "--precision-bits", "192", "--out",
                 dir}) == kExitOk);
  CHECK(load_json(dir + "/manifest.json").at("precision_bits").get<int>() ==
        192);
  REQUIRE(setenv(kPrecisionEnvVar, "not-a-number", 1) == 0);
  CHECK(run_cli({"bound", "--mu", "1", "--out", dir}) == kExitConfig);
  REQUIRE(unsetenv(kPrecisionEnvVar) == 0);
}

TEST_CASE("bound sweep emits the fit and the grid table") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_bound_sweep";
  CHECK(run_cli({"bound", "--mu", "1", "--sweep", "0.02:0.1:3", "--out",
                 dir}) == kExitOk);
  const json fit = load_json(dir + "/bound_fit.json");
  CHECK(fit.at("evaluator").get<std::string>() == "quantum_bound_lower");
  CHECK(fit.at("theory").get<double>() == 0.0);
  CHECK(fit.at("pass").get<bool>());
  CHECK(fit.at("points").size() == 3);
  const std::string csv = read_text_file(dir + "/bound_sweep.csv");
  CHECK(csv.rfind("delta,", 0) == 0);
  // Header plus three data rows.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("json-only mode suppresses csv output") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_json_only";
  CHECK(run_cli({"bound", "--mu", "1", "--sweep", "0.02:0.1:3", "--json",
                 "--out", dir}) == kExitOk);
  CHECK_NOTHROW(load_json(dir + "/bound_fit.json"));
  CHECK_THROWS_AS(read_text_file(dir + "/bound_sweep.csv"), ConfigError);
}

TEST_CASE("spade reruns with the same seed are byte-identical") {
  PrecisionGuard guard;
  const std::vector<std::string> common = {
      "spade", "--mode", "even:0", "--m",    "100000", "--eps",
      "0.01",  "--replicates", "3", "--seed", "123",   "--delta",
      "0.05"};
  auto with_out = [&](const std::string& dir) {
    std::vector<std::string> args = common;
    args.push_back("--out");
    args.push_back(dir);
    return args;
  };
  CHECK(run_cli(with_out("test_tmp/cli_spade_a")) == kExitOk);
  CHECK(run_cli(with_out("test_tmp/cli_spade_b")) == kExitOk);
  CHECK(read_text_file("test_tmp/cli_spade_a/spade_replicates.csv") ==
        read_text_file("test_tmp/cli_spade_b/spade_replicates.csv"));
  CHECK(read_text_file("test_tmp/cli_spade_a/spade_summary.json") ==
        read_text_file("test_tmp/cli_spade_b/spade_summary.json"));
  const json summary = load_json("test_tmp/cli_spade_a/spade_summary.json");
  REQUIRE(summary.at("entries").size() >= 1);
  CHECK(summary.at("entries")[0].at("analytic_variance").get<double>() > 0.0);
}

TEST_CASE("direct command reproduces the frozen information values") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_direct";
  CHECK(run_cli({"direct", "--mu", "1", "--delta", "0.1", "--psf", "gaussian",
                 "--out", dir}) == kExitOk);
  const json report = load_json(dir + "/direct.json");
  // Frozen from an independent high-precision evaluation.
  CHECK(report.at("fisher").get<double>() ==
        doctest::Approx(0.003322267878752095).epsilon(1e-9));
  CHECK(report.at("crb").get<double>() ==
        doctest::Approx(1.003330693064219e-5).epsilon(1e-9));  // N = 1e5
  CHECK(report.at("domination").at("pass").get<bool>());
  CHECK(report.at("note").get<std::string>().find("certified") !=
        std::string::npos);
  CHECK(!report.at("experimental").get<bool>());
}

TEST_CASE("hard-aperture direct run with the override") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_direct_exp";
  CHECK(run_cli({"direct", "--psf", "sinc2", "--mu", "1", "--delta", "0.05",
                 "--experimental", "--out", dir}) == kExitOk);
  const json report = load_json(dir + "/direct.json");
  CHECK(report.at("experimental").get<bool>());
  CHECK(!report.at("domination").at("pass").get<bool>());
  CHECK(report.at("fisher").get<double>() > 0.0);
}

TEST_CASE("demo composes quantum, spade, and direct sweeps") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_demo";
  CHECK(run_cli({"demo", "--points", "3", "--mu-max", "1", "--out", dir}) ==
        kExitOk);
  const json demo = load_json(dir + "/demo.json");
  CHECK(demo.at("rows").size() == 1);
  CHECK_NOTHROW(read_text_file(dir + "/demo_table.csv"));
}

TEST_CASE("sweep subcommand fits the requested evaluator") {
  PrecisionGuard guard;
  const std::string dir = "test_tmp/cli_sweep";
  CHECK(run_cli({"sweep", "--evaluator", "gram", "--order", "1", "--sweep",
                 "0.02:0.1:3", "--out", dir}) == kExitOk);
  const json fit = load_json(dir + "/sweep_fit.json");
  CHECK(fit.at("evaluator").get<std::string>() == "quantum_gram");
  CHECK(fit.at("theory").get<double>() == 2.0);
  CHECK(fit.at("slope").get<double>() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(fit.at("pass").get<bool>());
  CHECK(run_cli({"sweep", "--evaluator", "nonsense", "--out", dir}) ==
        kExitConfig);
}

TEST_CASE("config files are accepted") {
  PrecisionGuard guard;
  write_text_file("test_tmp/cli_cfg/empty.ini", "");
  CHECK(run_cli({"--config", "test_tmp/cli_cfg/empty.ini", "bound", "--mu",
                 "1", "--out", "test_tmp/cli_cfg/out"}) == kExitOk);
  CHECK(run_cli({"--config", "test_tmp/cli_cfg/missing.ini", "bound", "--mu",
                 "1", "--out", "test_tmp/cli_cfg/out"}) == kExitConfig);
}
