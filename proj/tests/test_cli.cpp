#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "config.hpp"
#include "runner.hpp"

using namespace jang::cli;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jang_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(JANG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("pipeline on the hyperboloid: mass chain of zeros") {
  const fs::path out = scratch_dir("hyperboloid");
  REQUIRE(run_cli("--builtin hyperboloid --out " + out.string() + " pipeline") == 0);
  const json chain = read_json(out / "mass_chain.json");
  for (const char* key : {"E", "alpha", "M_bar", "A", "M_conf", "M_conf_adm"}) {
    CAPTURE(key);
    CHECK(std::abs(chain.at(key).get<double>()) <= 1e-6);
  }
  CHECK(chain.at("pmt_ok").get<bool>());

  const json manifest = read_json(out / "manifest.json");
  CHECK(manifest.at("status") == "ok");
  CHECK(manifest.at("subcommand") == "pipeline");
  CHECK(manifest.contains("config_hash"));
  for (const auto& a : manifest.at("artifacts")) {
    CAPTURE(a.get<std::string>());
    CHECK(fs::exists(out / a.get<std::string>()));
  }
}

TEST_CASE("barriers on wang_m_sigma: fitted alpha") {
  const fs::path out = scratch_dir("barriers");
  REQUIRE(run_cli("--builtin wang_m_sigma --out " + out.string() + " barriers") == 0);
  const json b = read_json(out / "barriers.json");
  CHECK(b.at("alpha_fit").get<double>() == Approx(1.0).epsilon(0.03));
  CHECK(b.at("alpha_expected").get<double>() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("malformed configurations exit with status 2") {
  const fs::path dir = scratch_dir("malformed");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string out = " --out " + (dir / "out").string();
  CHECK(run_cli("--config " + write("broken.json", "{\"data\": ") + out + " pipeline") == 2);
  CHECK(run_cli("--config " + write("unknown.json", R"({"data": "hyperboloid", "gird": {}})") + out + " pipeline") ==
        2);
  CHECK(run_cli("--config " + write("family.json", R"({"data": "kerr"})") + out + " pipeline") == 2);
  CHECK(run_cli("--config " + write("grid.json", R"({"data": "hyperboloid", "grid": {"nodes": -4}})") + out +
                " pipeline") == 2);
  CHECK(run_cli("--config " + (dir / "missing.json").string() + out + " pipeline") == 2);
  CHECK(run_cli("--builtin hyperboloid --tolerance -1" + out + " pipeline") == 2);
  CHECK(run_cli("--config " +
                write("step.json", R"({"data": "hyperboloid", "schedule": {"explicit": [{"R": 200, "tau": 2}]}})") +
                out + " solve") == 2);

  SUBCASE("the parser reports the same errors in process") {
    CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"grid", json::object()}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"data", "kerr"}}), ConfigError);
  }
}

TEST_CASE("identical configurations give bitwise identical CSV files") {
  PipelineConfig cfg = builtin_config("wang_mp");
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  Runner ra(cfg, {a.string(), 2, std::nullopt, 0});
  Runner rb(cfg, {b.string(), 1, std::nullopt, 7});
  REQUIRE(ra.run("pipeline") == 0);
  REQUIRE(rb.run("pipeline") == 0);
  int compared = 0;
  for (const std::string& name : ra.artifacts()) {
    if (fs::path(name).extension() != ".csv") continue;
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
    ++compared;
  }
  CHECK(compared >= 5);
}

TEST_CASE("config hash is canonical") {
  const json x = json::parse(R"({"data": "hyperboloid", "tolerance": 1e-6})");
  const json y = json::parse(R"({"tolerance": 1e-6, "data": "hyperboloid"})");
  CHECK(config_hash(x) == config_hash(y));
  CHECK(config_hash(x) != config_hash(json::parse(R"({"data": "wang_mp"})")));
}

TEST_CASE("a failing stage keeps the manifest and exits 1") {
  // With tau = 1e-2 at R = 200 the hyperboloid solve leaves the barrier slab.
  const fs::path dir = scratch_dir("stagefail");
  std::ofstream(dir / "cfg.json") << R"({"data": "hyperboloid", "schedule": {"R0": 200, "tau0": 1e-2, "steps": 2}})";
  const int code = run_cli("--config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string() + " solve");
  CHECK(code == 1);
  const json manifest = read_json(dir / "out" / "manifest.json");
  CHECK(manifest.at("status") == "failed");
  CHECK_FALSE(manifest.at("error").get<std::string>().empty());
  for (const auto& a : manifest.at("artifacts")) CHECK(fs::exists(dir / "out" / a.get<std::string>()));
}
