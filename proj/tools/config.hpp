#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "jang/grid.hpp"
#include "jang/initial_data.hpp"
#include "jang/jang.hpp"

namespace jang::cli {

using json = nlohmann::json;

/// Malformed or inconsistent configuration; the runner exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  double r_inner = 0.0;  // 0: barrier r0, or 1e-2 for data with a regular center
  double R = 1e5;
  std::size_t nodes = 1601;
  Spacing mode = Spacing::logarithmic;
};

struct BarrierConfig {
  std::optional<std::array<double, 8>> C;
  std::optional<double> alpha;
  std::optional<double> r0;
  double r_max = 1e5;
  std::size_t nodes = 800;
  double tail_lo = 1e2, tail_hi = 1e4;  // constants and the alpha fit use this window
  int max_retries = 6;
};

struct ScheduleConfig {
  double R0 = 700.0;
  double tau0 = 1e-14;
  int steps = 6;
  std::vector<ScheduleStep> explicit_steps;  // replaces the geometric schedule when non-empty
  double inner_lo = 5.0, inner_hi = 50.0;
};

struct GeometryConfig {
  double r_lo = 2.0, r_hi = 100.0;  // sampled region of the report
  double adm_lo = 1e3, adm_hi = 0.0;  // 0: grid R / 2
};

struct ConformalConfig {
  double outer_radius = 0.0;  // 0: grid R
  double tail_fraction = 0.01;
  double adm_lo = 0.0, adm_hi = 0.0;  // 0: R / 100 and R / 2
};

struct Stages {
  bool constraints = true, barriers = true, solve = true, geometry = true, conformal = true;
};

struct PipelineConfig {
  std::string family;                 // builtin name or the inline spec name
  std::optional<WangDataSpec> wang;   // inline Wang data
  std::optional<double> areal_energy; // inline areal-chart family
  GridConfig grid;
  int sphere_degree = 8;
  BarrierConfig barriers;
  ScheduleConfig schedule;
  GeometryConfig geometry;
  ConformalConfig conformal;
  Stages stages;
  double tolerance = 1e-6;
  std::string output_dir = "out";
  json source;  // the parsed document, echoed into the manifest
};

/// Names accepted as "data": "hyperboloid", "wang_m_sigma", "wang_mp".
const std::vector<std::string>& builtin_families();

PipelineConfig parse_config(const json& doc);
PipelineConfig load_config(const std::string& path);
/// Default configuration of a builtin family.
PipelineConfig builtin_config(const std::string& name);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) dump of the document.
std::uint64_t config_hash(const json& doc);

struct Family {
  InitialData data;
  double energy = 0.0;
};

Family make_family(const PipelineConfig& cfg);

}  // namespace jang::cli
