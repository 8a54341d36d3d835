#pragma once

// Scenario configuration, presets, the eps sweep and deterministic table output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "damagelab/boundary.hpp"
#include "damagelab/eps_evolution.hpp"
#include "damagelab/limit_evolution.hpp"
#include "damagelab/material.hpp"

namespace damagelab {

struct ScenarioConfig {
  std::string preset;  ///< name of the preset the datum came from, empty if explicit
  MaterialParams material;
  BoundaryDatum datum{{0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}};
  std::vector<double> eps_list;
  std::size_t cells = 64;
  std::size_t steps = 400;
  std::uint64_t seed = 0;
  std::string output_dir = ".";

  /// Material invariants, datum horizon equal to material.horizon, positive
  /// cells and steps, eps values inside (0, a1/a0) and strictly decreasing.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

[[nodiscard]] const std::vector<PresetInfo>& preset_catalog();

/// Boundary datum of a named preset for material `m` (horizon m.horizon).
/// Throws ConfigError for unknown names and for `loading-unloading` when
/// T <= 2 s* / a1.
[[nodiscard]] BoundaryDatum preset_datum(const std::string& name, const MaterialParams& m);

/// Fully specified configuration with default parameters.
[[nodiscard]] ScenarioConfig preset(const std::string& name);

[[nodiscard]] ScenarioConfig preset(const std::string& name, const MaterialParams& m);

/// Canonical JSON serialization and its inverse. parse_config accepts either
/// explicit samples or {"preset": name} under "datum". Throws ConfigError.
[[nodiscard]] nlohmann::json config_to_json(const ScenarioConfig& cfg);
[[nodiscard]] ScenarioConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] std::string emit_config(const ScenarioConfig& cfg);
[[nodiscard]] ScenarioConfig parse_config(const std::string& text);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

struct SweepRow {
  double epsilon = 0.0;
  double sup_sigma = 0.0;   ///< sup_t |sigma_eps - sigma|
  double sup_damage = 0.0;  ///< sup_t |l_eps - l|
  double sup_energy = 0.0;  ///< sup_t |E_eps - E|
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool sigma_monotone = true;   ///< deviations nonincreasing along the sweep
  bool damage_monotone = true;
  bool energy_monotone = true;
};

/// Runs every eps of cfg.eps_list concurrently against one limit run on the
/// same grid. Errors are rethrown with the offending eps in the message.
[[nodiscard]] SweepReport sweep_eps(const ScenarioConfig& cfg);

/// Textbook comparison curves for the same jump history.
struct ComparisonCurves {
  std::vector<double> plasticity;  ///< perfect plasticity with residual strain
  std::vector<double> damage;      ///< secant stiffness degradation, linear hardening
};

[[nodiscard]] ComparisonCurves textbook_curves(const MaterialParams& m,
                                               const std::vector<double>& jumps);

/// Writes sigma_vs_t.csv, sigma_vs_J.csv, l_vs_t.csv, energy_vs_t.csv and
/// comparison.csv into `out_dir` (created if missing). Returns the paths.
std::vector<std::filesystem::path> emit_figures(const ScenarioConfig& cfg,
                                                const LimitTrajectory& traj,
                                                const std::filesystem::path& out_dir);

void write_eps_csv(std::ostream& os, const EpsTrajectory& traj, const MaterialParams& m);
void write_limit_csv(std::ostream& os, const LimitTrajectory& traj, const MaterialParams& m);
void write_sweep_csv(std::ostream& os, const SweepReport& report);
void write_envelope_table(std::ostream& os, double a, double b, double K, double xi_min,
                          double xi_max, std::size_t n);

/// "%.17g" rendering used by every table.
[[nodiscard]] std::string format_number(double v);

}  // namespace damagelab
