#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace jang::cli;
  CLI::App app{"Jang equation pipeline runner"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, builtin, out_dir;
  unsigned jobs = 0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--builtin", builtin, "builtin family instead of a config file")
      ->check(CLI::IsMember(builtin_families()));
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads per stage (0: all cores)");
  app.add_option("--tolerance", tolerance, "solver tolerance override")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "recorded in the manifest; the pipeline is deterministic");

  const std::vector<std::pair<std::string, std::string>> help{
      {"constraints", "constraint densities, DEC margin and the mass vector"},
      {"barriers", "barrier construction and asymptotic fits"},
      {"solve", "tau = 0 radial graph and the regularized schedule"},
      {"geometry", "induced metric, curvature routes and ADM mass"},
      {"conformal", "conformal factor and the mass chain"},
      {"pipeline", "every enabled stage"},
      {"convergence", "grid, outer-radius and tau refinement study"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  PipelineConfig cfg;
  try {
    if (!config_path.empty() && !builtin.empty()) throw ConfigError("give either --config or --builtin");
    if (config_path.empty() && builtin.empty()) throw ConfigError("one of --config or --builtin is required");
    cfg = config_path.empty() ? builtin_config(builtin) : load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  RunOptions opt;
  if (!out_dir.empty()) opt.out_dir = out_dir;
  opt.jobs = jobs;
  if (tolerance > 0.0) opt.tolerance = tolerance;
  opt.seed = seed;

  try {
    Runner runner(cfg, opt);
    runner.run(sub);
    std::cout << runner.summary().dump(2) << '\n';
    std::cout << "artifacts written to " << runner.output_dir() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
