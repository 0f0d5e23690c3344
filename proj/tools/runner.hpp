#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "jang/barriers.hpp"
#include "jang/conformal.hpp"
#include "jang/graph.hpp"
#include "jang/jang.hpp"

namespace jang::cli {

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides the config's output_dir
  unsigned jobs = 0;                   // 0: hardware concurrency
  std::optional<double> tolerance;     // overrides the config's solver tolerance
  std::uint64_t seed = 0;              // recorded only; every stage is deterministic
};

/// Subcommands in the order of the stages they end with.
const std::vector<std::string>& subcommands();

/// Runs one subcommand (with its prerequisite stages) and writes the artifacts
/// and manifest.json into the output directory. Returns the process exit status:
/// 0 on success, 1 when a stage fails (the manifest records the error).
class Runner {
 public:
  Runner(PipelineConfig cfg, RunOptions options);

  int run(const std::string& subcommand);

  [[nodiscard]] const json& summary() const { return summary_; }
  [[nodiscard]] const std::vector<std::string>& artifacts() const { return artifacts_; }
  [[nodiscard]] const std::string& output_dir() const { return out_; }

 private:
  void stage_constraints();
  void stage_barriers();
  void stage_solve();
  void stage_geometry();
  void stage_conformal();
  void stage_convergence();

  void ensure_barriers();
  void ensure_graph();
  void ensure_metric();

  double graph_start() const;
  RadialGrid graph_grid(std::size_t nodes) const;

  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);
  void write_json(const std::string& name, const json& doc);
  void write_text(const std::string& name, const std::string& text);
  void write_manifest(const std::string& subcommand, const std::string& status, const std::string& error);

  PipelineConfig cfg_;
  RunOptions options_;
  std::string out_;
  Family family_;
  std::optional<BarrierSolution> barriers_;
  std::optional<RadialGraph> graph_;
  std::optional<GraphMetric> metric_;
  std::vector<std::string> artifacts_;
  json summary_ = json::object();
};

/// Human-readable table of a mass chain.
std::string format_mass_chain(const MassChain& chain);

}  // namespace jang::cli
