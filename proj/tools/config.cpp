#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "jang/barriers.hpp"

namespace jang::cli {

namespace {

const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const char* key, double fallback) {
  const json* v = member(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
  return x;
}

std::size_t count(const json& obj, const char* key, std::size_t fallback) {
  const json* v = member(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0)
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  return v->get<std::size_t>();
}

bool flag(const json& obj, const char* key, bool fallback) {
  const json* v = member(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
  return v->get<bool>();
}

const json& object(const json& obj, const char* key) {
  static const json empty = json::object();
  const json* v = member(obj, key);
  if (v == nullptr) return empty;
  if (!v->is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return *v;
}

// A scalar is the constant function with that value; a list holds [l, m, value] triples.
HarmonicCoeffs harmonic_field(const json& v, const std::string& where) {
  if (v.is_number()) {
    HarmonicCoeffs h(0);
    h.set(0, 0, v.get<double>() * 2.0 * std::sqrt(std::numbers::pi));
    return h;
  }
  if (!v.is_array()) throw ConfigError(where + " must be a number or a list of [l, m, value]");
  int degree = 0;
  for (const json& t : v) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() || !t[2].is_number())
      throw ConfigError(where + " entries must be [l, m, value]");
    const int l = t[0].get<int>(), m = t[1].get<int>();
    if (l < 0 || std::abs(m) > l) throw ConfigError(where + " has an invalid (l, m) pair");
    degree = std::max(degree, l);
  }
  HarmonicCoeffs h(degree);
  for (const json& t : v) h.add(t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
  return h;
}

SymTensorField tensor_field(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + " must be an object");
  SymTensorField f;
  for (const auto& [key, val] : v.items()) {
    const std::string w = where + "." + key;
    if (key == "sigma")
      f.sigma = harmonic_field(val, w);
    else if (key == "tf_plus")
      f.tf_plus = harmonic_field(val, w);
    else if (key == "tf_cross")
      f.tf_cross = harmonic_field(val, w);
    else if (key == "antisym")
      f.antisym = harmonic_field(val, w);
    else
      throw ConfigError("unknown component " + w);
  }
  return f;
}

void apply_builtin(PipelineConfig& cfg, const std::string& name) {
  cfg.family = name;
  if (name == "hyperboloid") {
    cfg.grid = {0.0, 1e4, 1201, Spacing::logarithmic};
    cfg.geometry.adm_lo = 1e2;
    // The barrier slab closes like 1/r on this family; beyond R ~ 2e3 it is
    // thinner than the discretization error of the default grid.
    cfg.schedule.R0 = 200.0;
    cfg.schedule.tau0 = 1e-13;
  } else if (name == "wang_m_sigma") {
    WangDataSpec spec;
    spec.name = name;
    spec.m = SymTensorField::multiple_of_sigma(1.0);
    spec.remainders.g_angular = 1.0;
    cfg.wang = spec;
  } else if (name == "wang_mp") {
    cfg.areal_energy = 0.5;
    cfg.grid = {0.0, 2e4, 1601, Spacing::logarithmic};
    cfg.geometry.adm_lo = 2e2;
    cfg.stages.barriers = false;
  } else {
    throw ConfigError("unknown builtin family '" + name + "'");
  }
}

}  // namespace

const std::vector<std::string>& builtin_families() {
  static const std::vector<std::string> names{"hyperboloid", "wang_m_sigma", "wang_mp"};
  return names;
}

PipelineConfig builtin_config(const std::string& name) {
  PipelineConfig cfg;
  apply_builtin(cfg, name);
  cfg.source = json{{"data", name}};
  return cfg;
}

PipelineConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::vector<std::string> known{"data",     "grid",      "sphere_degree", "barriers", "schedule",
                                              "geometry", "conformal", "stages",        "tolerance", "output_dir"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown key '" + key + "'");

  PipelineConfig cfg;
  const json* data = member(doc, "data");
  if (data == nullptr) throw ConfigError("'data' is required");
  if (data->is_string()) {
    apply_builtin(cfg, data->get<std::string>());
  } else if (data->is_object()) {
    cfg.family = data->value("name", std::string("inline"));
    if (const json* e = member(*data, "areal_energy")) {
      if (!e->is_number() || e->get<double>() < 0.0) throw ConfigError("'areal_energy' must be a number >= 0");
      cfg.areal_energy = e->get<double>();
      cfg.stages.barriers = false;
    } else {
      WangDataSpec spec;
      spec.name = cfg.family;
      if (const json* m = member(*data, "m")) spec.m = tensor_field(*m, "data.m");
      if (const json* p = member(*data, "p")) spec.p = tensor_field(*p, "data.p");
      const json& rem = object(*data, "remainders");
      spec.remainders.g_angular = number(rem, "g_angular", 0.0);
      spec.remainders.k_angular = number(rem, "k_angular", 0.0);
      try {
        spec.validate();
      } catch (const ValidationError& e) {
        throw ConfigError(std::string("data: ") + e.what());
      }
      cfg.wang = spec;
    }
  } else {
    throw ConfigError("'data' must be a builtin name or an inline object");
  }

  const json& grid = object(doc, "grid");
  cfg.grid.r_inner = number(grid, "r_inner", cfg.grid.r_inner);
  cfg.grid.R = number(grid, "R", cfg.grid.R);
  cfg.grid.nodes = count(grid, "nodes", cfg.grid.nodes);
  if (const json* mode = member(grid, "mode")) {
    if (*mode == "log")
      cfg.grid.mode = Spacing::logarithmic;
    else if (*mode == "uniform")
      cfg.grid.mode = Spacing::uniform;
    else
      throw ConfigError("grid.mode must be \"log\" or \"uniform\"");
  }
  if (cfg.grid.r_inner < 0.0 || !(cfg.grid.R > 0.0) || cfg.grid.nodes < 5)
    throw ConfigError("grid needs r_inner >= 0, R > 0 and at least five nodes");

  if (const json* deg = member(doc, "sphere_degree")) {
    if (!deg->is_number_integer() || deg->get<int>() < 0) throw ConfigError("'sphere_degree' must be an integer >= 0");
    cfg.sphere_degree = deg->get<int>();
  }

  const json& bar = object(doc, "barriers");
  if (const json* C = member(bar, "C")) {
    if (!C->is_array() || C->size() != 8) throw ConfigError("barriers.C must list eight numbers");
    std::array<double, 8> c{};
    for (std::size_t i = 0; i < 8; ++i) {
      if (!(*C)[i].is_number() || (*C)[i].get<double>() < 0.0) throw ConfigError("barriers.C entries must be >= 0");
      c[i] = (*C)[i].get<double>();
    }
    cfg.barriers.C = c;
  }
  if (member(bar, "alpha") != nullptr) cfg.barriers.alpha = number(bar, "alpha", 0.0);
  if (member(bar, "r0") != nullptr) {
    cfg.barriers.r0 = number(bar, "r0", 1.0);
    if (!(*cfg.barriers.r0 > 0.0)) throw ConfigError("barriers.r0 must be positive");
  }
  cfg.barriers.r_max = number(bar, "r_max", cfg.barriers.r_max);
  cfg.barriers.nodes = count(bar, "nodes", cfg.barriers.nodes);
  cfg.barriers.tail_lo = number(bar, "tail_lo", cfg.barriers.tail_lo);
  cfg.barriers.tail_hi = number(bar, "tail_hi", cfg.barriers.tail_hi);
  cfg.barriers.max_retries = static_cast<int>(count(bar, "max_retries", 6));

  const json& sch = object(doc, "schedule");
  cfg.schedule.R0 = number(sch, "R0", cfg.schedule.R0);
  cfg.schedule.tau0 = number(sch, "tau0", cfg.schedule.tau0);
  cfg.schedule.steps = static_cast<int>(count(sch, "steps", static_cast<std::size_t>(cfg.schedule.steps)));
  cfg.schedule.inner_lo = number(sch, "inner_lo", cfg.schedule.inner_lo);
  cfg.schedule.inner_hi = number(sch, "inner_hi", cfg.schedule.inner_hi);
  if (const json* steps = member(sch, "explicit")) {
    if (!steps->is_array()) throw ConfigError("schedule.explicit must be a list of {R, tau}");
    for (const json& s : *steps) {
      if (!s.is_object()) throw ConfigError("schedule.explicit must be a list of {R, tau}");
      const ScheduleStep step{number(s, "R", 0.0), number(s, "tau", 0.0)};
      if (!(step.R > 0.0) || !(step.tau > 0.0 && step.tau < 1.0))
        throw ConfigError("schedule.explicit steps need R > 0 and tau in (0, 1)");
      cfg.schedule.explicit_steps.push_back(step);
    }
  }
  if (!(cfg.schedule.tau0 > 0.0) || cfg.schedule.steps < 1) throw ConfigError("schedule needs tau0 > 0, steps >= 1");

  const json& geo = object(doc, "geometry");
  cfg.geometry.r_lo = number(geo, "r_lo", cfg.geometry.r_lo);
  cfg.geometry.r_hi = number(geo, "r_hi", cfg.geometry.r_hi);
  cfg.geometry.adm_lo = number(geo, "adm_lo", cfg.geometry.adm_lo);
  cfg.geometry.adm_hi = number(geo, "adm_hi", cfg.geometry.adm_hi);

  const json& con = object(doc, "conformal");
  cfg.conformal.outer_radius = number(con, "outer_radius", 0.0);
  cfg.conformal.tail_fraction = number(con, "tail_fraction", cfg.conformal.tail_fraction);
  cfg.conformal.adm_lo = number(con, "adm_lo", 0.0);
  cfg.conformal.adm_hi = number(con, "adm_hi", 0.0);

  const json& st = object(doc, "stages");
  cfg.stages.constraints = flag(st, "constraints", cfg.stages.constraints);
  cfg.stages.barriers = flag(st, "barriers", cfg.stages.barriers);
  cfg.stages.solve = flag(st, "solve", cfg.stages.solve);
  cfg.stages.geometry = flag(st, "geometry", cfg.stages.geometry);
  cfg.stages.conformal = flag(st, "conformal", cfg.stages.conformal);
  if (cfg.stages.barriers && cfg.areal_energy) throw ConfigError("barriers need Wang data; disable the stage");
  if (cfg.stages.geometry && !cfg.stages.solve) throw ConfigError("geometry needs the solve stage");
  if (cfg.stages.conformal && !cfg.stages.geometry) throw ConfigError("conformal needs the geometry stage");
  if (cfg.stages.solve && !cfg.stages.barriers && !cfg.areal_energy)
    throw ConfigError("solve needs the barriers stage for data without a regular center");

  cfg.tolerance = number(doc, "tolerance", cfg.tolerance);
  if (!(cfg.tolerance > 0.0)) throw ConfigError("'tolerance' must be positive");
  if (const json* out = member(doc, "output_dir")) {
    if (!out->is_string()) throw ConfigError("'output_dir' must be a string");
    cfg.output_dir = out->get<std::string>();
  }
  cfg.source = doc;
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::uint64_t config_hash(const json& doc) {
  // nlohmann::json objects keep keys sorted, so dump() is canonical.
  const std::string s = doc.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Family make_family(const PipelineConfig& cfg) {
  if (cfg.areal_energy) return {make_areal_mass_data(*cfg.areal_energy), *cfg.areal_energy};
  if (cfg.family == "hyperboloid" && !cfg.wang) return {make_hyperboloid_data(), 0.0};
  if (!cfg.wang) throw ConfigError("no data specification");
  return {make_wang_data(*cfg.wang), energy_wang(*cfg.wang)};
}

}  // namespace jang::cli
