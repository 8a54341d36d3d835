#include "damagelab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "damagelab/diagnostics.hpp"
#include "damagelab/envelope.hpp"

namespace damagelab {

using nlohmann::json;

void ScenarioConfig::validate() const {
  material.validate();
  if (std::abs(datum.horizon() - material.horizon) > 1e-12 * material.horizon) {
    throw ConfigError("datum horizon differs from material horizon");
  }
  if (cells == 0) throw ConfigError("cells must be positive");
  if (steps == 0) throw ConfigError("steps must be positive");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    (void)material.plateau_factor(eps_list[i]);
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw ConfigError("eps_list must be strictly decreasing");
    }
  }
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"monotone", "J(t) = t on [0, T]"},
      {"constant", "J(t) = 0.4 for all t"},
      {"loading-unloading", "w(t,x) = x t on [0, T/2], x (T - t) after; needs T > 2 s*/a1"},
      {"high-unload", "J rises to 2 J* at T/2 and decreases to 1.5 J* at T, J* = s* L/a1"},
  };
  return catalog;
}

BoundaryDatum preset_datum(const std::string& name, const MaterialParams& m) {
  m.validate();
  const double T = m.horizon;
  const double L = m.length;
  if (name == "monotone") {
    return BoundaryDatum({0.0, T}, {0.0, 0.0}, {0.0, T});
  }
  if (name == "constant") {
    return BoundaryDatum({0.0, T}, {0.0, 0.0}, {0.4, 0.4});
  }
  if (name == "loading-unloading") {
    const double needed = 2.0 * m.yield_stress() / m.a1;
    if (!(T > needed)) {
      std::ostringstream msg;
      msg << "loading-unloading needs T > 2 sqrt(2 kappa a0)/a1 = " << needed << ", got T = " << T;
      throw ConfigError(msg.str());
    }
    return BoundaryDatum({0.0, 0.5 * T, T}, {0.0, 0.0, 0.0}, {0.0, 0.5 * T * L, 0.0});
  }
  if (name == "high-unload") {
    const double j_star = m.elastic_jump_limit();
    return BoundaryDatum({0.0, 0.5 * T, T}, {0.0, 0.0, 0.0}, {0.0, 2.0 * j_star, 1.5 * j_star});
  }
  throw ConfigError("unknown preset '" + name + "'");
}

ScenarioConfig preset(const std::string& name, const MaterialParams& m) {
  ScenarioConfig cfg;
  cfg.preset = name;
  cfg.material = m;
  cfg.datum = preset_datum(name, m);
  cfg.eps_list = {0.1, 0.05, 0.02, 0.01};
  cfg.output_dir = "out/" + name;
  cfg.validate();
  return cfg;
}

ScenarioConfig preset(const std::string& name) { return preset(name, MaterialParams{}); }

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["material"] = {{"kappa", cfg.material.kappa},
                   {"a0", cfg.material.a0},
                   {"a1", cfg.material.a1},
                   {"length", cfg.material.length},
                   {"horizon", cfg.material.horizon}};
  json datum = {{"times", cfg.datum.times()},
                {"w0", cfg.datum.left()},
                {"wL", cfg.datum.right()}};
  if (!cfg.preset.empty()) datum["preset"] = cfg.preset;
  j["datum"] = std::move(datum);
  j["eps_list"] = cfg.eps_list;
  j["cells"] = cfg.cells;
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  j["output"] = {{"dir", cfg.output_dir}};
  return j;
}

namespace {

template <typename T>
T read_field(const json& obj, const char* key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  ScenarioConfig cfg;
  if (j.contains("material")) {
    const auto& mat = j.at("material");
    if (!mat.is_object()) throw ConfigError("'material' must be an object");
    cfg.material.kappa = read_field(mat, "kappa", cfg.material.kappa);
    cfg.material.a0 = read_field(mat, "a0", cfg.material.a0);
    cfg.material.a1 = read_field(mat, "a1", cfg.material.a1);
    cfg.material.length = read_field(mat, "length", cfg.material.length);
    cfg.material.horizon = read_field(mat, "horizon", cfg.material.horizon);
  }
  cfg.material.validate();

  if (!j.contains("datum") || !j.at("datum").is_object()) {
    throw ConfigError("config needs a 'datum' object");
  }
  const auto& datum = j.at("datum");
  cfg.preset = read_field<std::string>(datum, "preset", "");
  if (datum.contains("times")) {
    cfg.datum = BoundaryDatum(read_field<std::vector<double>>(datum, "times", {}),
                              read_field<std::vector<double>>(datum, "w0", {}),
                              read_field<std::vector<double>>(datum, "wL", {}));
  } else if (!cfg.preset.empty()) {
    cfg.datum = preset_datum(cfg.preset, cfg.material);
  } else {
    throw ConfigError("'datum' needs explicit samples or a preset name");
  }

  cfg.eps_list = read_field<std::vector<double>>(j, "eps_list", {});
  cfg.cells = read_field<std::size_t>(j, "cells", cfg.cells);
  cfg.steps = read_field<std::size_t>(j, "steps", cfg.steps);
  cfg.seed = read_field<std::uint64_t>(j, "seed", cfg.seed);
  if (j.contains("output")) {
    cfg.output_dir = read_field<std::string>(j.at("output"), "dir", cfg.output_dir);
  }
  cfg.validate();
  return cfg;
}

std::string emit_config(const ScenarioConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SweepReport sweep_eps(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.eps_list.empty()) throw ConfigError("sweep needs a nonempty eps_list");
  const auto grid = uniform_time_grid(cfg.datum, cfg.steps);
  const auto limit = run_limit(cfg.material, cfg.datum, grid);

  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(cfg.eps_list.size());
  for (double eps : cfg.eps_list) {
    jobs.push_back(std::async(std::launch::async, [&cfg, &grid, &limit, eps] {
      EpsTrajectory traj;
      try {
        traj = run_eps(cfg.material, eps, cfg.cells, cfg.datum, grid);
      } catch (const NumericalError& e) {
        std::ostringstream msg;
        msg << "eps = " << eps << ": " << e.what();
        throw NumericalError(msg.str());
      }
      SweepRow row;
      row.epsilon = eps;
      for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const auto& rec = traj.records[k];
        const auto& lim = limit.states[k];
        row.sup_sigma = std::max(row.sup_sigma, std::abs(rec.state.sigma - lim.sigma));
        row.sup_damage = std::max(
            row.sup_damage, std::abs(damage_mass(rec.state, cfg.material) - lim.damage_mass));
        row.sup_energy = std::max(row.sup_energy, std::abs(rec.energy - lim.energy));
      }
      return row;
    }));
  }

  SweepReport report;
  for (auto& job : jobs) report.rows.push_back(job.get());
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    report.sigma_monotone = report.sigma_monotone && b.sup_sigma <= a.sup_sigma;
    report.damage_monotone = report.damage_monotone && b.sup_damage <= a.sup_damage;
    report.energy_monotone = report.energy_monotone && b.sup_energy <= a.sup_energy;
  }
  return report;
}

ComparisonCurves textbook_curves(const MaterialParams& m, const std::vector<double>& jumps) {
  const double k0 = m.a1 / m.length;
  const double s_star = m.yield_stress();
  const double j_yield = s_star / k0;
  const double hardening = 0.1 * k0;

  ComparisonCurves out;
  out.plasticity.reserve(jumps.size());
  out.damage.reserve(jumps.size());
  double plastic_jump = 0.0;
  double max_jump = 0.0;
  for (double J : jumps) {
    const double trial = k0 * (J - plastic_jump);
    if (std::abs(trial) > s_star) {
      plastic_jump = J - std::copysign(s_star, trial) / k0;
      out.plasticity.push_back(std::copysign(s_star, trial));
    } else {
      out.plasticity.push_back(trial);
    }

    max_jump = std::max(max_jump, std::abs(J));
    if (max_jump <= j_yield) {
      out.damage.push_back(k0 * J);
    } else {
      const double secant = (s_star + hardening * (max_jump - j_yield)) / max_jump;
      out.damage.push_back(secant * J);
    }
  }
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      if (!first) os_ << ',';
      os_ << n;
      first = false;
    }
    os_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) os_ << ',';
      os_ << format_number(v);
      first = false;
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_eps_csv(std::ostream& os, const EpsTrajectory& traj, const MaterialParams& m) {
  CsvWriter csv(os);
  csv.header({"t", "J", "sigma", "Theta_mean", "l_eps", "energy", "work_cum", "eb_residual"});
  for (const auto& r : traj.records) {
    csv.row({r.t, r.jump, r.state.sigma, mean_sound_fraction(r.state), damage_mass(r.state, m),
             r.energy, r.work, r.eb_residual});
  }
}

void write_limit_csv(std::ostream& os, const LimitTrajectory& traj, const MaterialParams& m) {
  CsvWriter csv(os);
  csv.header({"t", "J", "sigma", "l", "E_closed", "E_integrated", "e", "p_total", "t0_flag",
              "saturated"});
  const double s_star = m.yield_stress();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& s = traj.states[k];
    const bool saturated = std::abs(std::abs(s.sigma) - s_star) <= 1e-12 * s_star;
    csv.row({s.t, s.jump, s.sigma, s.damage_mass, s.energy, traj.energy_integrated[k],
             s.elastic_strain, s.plastic_mass, s.t == traj.t0 ? 1.0 : 0.0,
             saturated ? 1.0 : 0.0});
  }
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  CsvWriter csv(os);
  csv.header({"eps", "sup_sigma", "sup_l", "sup_energy"});
  for (const auto& r : report.rows) {
    csv.row({r.epsilon, r.sup_sigma, r.sup_damage, r.sup_energy});
  }
}

void write_envelope_table(std::ostream& os, double a, double b, double K, double xi_min,
                          double xi_max, std::size_t n) {
  if (n < 2) throw ConfigError("envelope table needs at least two points");
  if (!(xi_max > xi_min)) throw ConfigError("envelope table needs xi_max > xi_min");
  TwoWellParams p = [&] {
    try {
      return TwoWellParams(a, b, K);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  CsvWriter csv(os);
  csv.header({"xi", "raw", "envelope", "theta_star"});
  for (std::size_t i = 0; i < n; ++i) {
    const double xi =
        xi_min + (xi_max - xi_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    csv.row({xi, raw_energy(p, xi), convex_envelope(p, xi), optimal_theta(p, xi)});
  }
}

std::vector<std::filesystem::path> emit_figures(const ScenarioConfig& cfg,
                                                const LimitTrajectory& traj,
                                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto& m = cfg.material;
  std::vector<std::filesystem::path> written;

  {
    const auto path = out_dir / "sigma_vs_t.csv";
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.header({"t", "sigma"});
    for (const auto& s : traj.states) csv.row({s.t, s.sigma});
    written.push_back(path);
  }
  {
    const auto path = out_dir / "sigma_vs_J.csv";
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.header({"J", "sigma"});
    for (const auto& s : traj.states) csv.row({s.jump, s.sigma});
    written.push_back(path);
  }
  {
    const auto path = out_dir / "l_vs_t.csv";
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.header({"t", "l"});
    for (const auto& s : traj.states) csv.row({s.t, s.damage_mass});
    written.push_back(path);
  }
  {
    const auto path = out_dir / "energy_vs_t.csv";
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.header({"t", "E_closed", "E_integrated", "work", "dissipation", "eb_residual"});
    const auto work = work_series(traj);
    const auto diss = dissipation_series(traj, m);
    const auto residual = energy_balance_residuals(traj, m);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      csv.row({traj.states[k].t, traj.states[k].energy, traj.energy_integrated[k], work[k],
               diss[k], residual[k]});
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "comparison.csv";
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.header({"t", "J", "sigma_effective", "sigma_plasticity", "sigma_damage"});
    std::vector<double> jumps;
    jumps.reserve(traj.states.size());
    for (const auto& s : traj.states) jumps.push_back(s.jump);
    const auto curves = textbook_curves(m, jumps);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      csv.row({traj.states[k].t, jumps[k], traj.states[k].sigma, curves.plasticity[k],
               curves.damage[k]});
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace damagelab
