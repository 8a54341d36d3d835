// Command-line front end: simulations, classification, sweeps and table output.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "damagelab/boundary.hpp"
#include "damagelab/diagnostics.hpp"
#include "damagelab/eps_evolution.hpp"
#include "damagelab/limit_evolution.hpp"
#include "damagelab/material.hpp"
#include "damagelab/scenarios.hpp"

namespace {

using namespace damagelab;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> cells;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps;
};

ScenarioConfig resolve_config(const GlobalOptions& g) {
  if (!g.config.empty() && !g.preset.empty()) {
    throw ConfigError("give either --config or --preset, not both");
  }
  if (g.config.empty() && g.preset.empty()) {
    throw ConfigError("a scenario is required: pass --config <file> or --preset <name>");
  }
  ScenarioConfig cfg = g.config.empty() ? preset(g.preset) : load_config(g.config);
  if (g.steps) cfg.steps = *g.steps;
  if (g.cells) cfg.cells = *g.cells;
  if (g.seed) cfg.seed = *g.seed;
  if (!g.eps.empty()) cfg.eps_list = g.eps;
  cfg.validate();
  return cfg;
}

// Writes through `emit` to --out, or to stdout when --out is empty.
template <typename Emit>
void with_output(const std::string& out, Emit&& emit) {
  if (out.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file " + out);
  emit(file);
  if (!file) throw std::runtime_error("failed writing " + out);
}

int run_simulate_eps(const GlobalOptions& g) {
  const auto cfg = resolve_config(g);
  if (g.eps.size() > 1) throw ConfigError("simulate-eps takes a single --eps value");
  if (cfg.eps_list.empty()) throw ConfigError("no eps given (use --eps or eps_list)");
  const double eps = g.eps.empty() ? cfg.eps_list.back() : g.eps.front();
  const auto grid = uniform_time_grid(cfg.datum, cfg.steps);
  const auto traj = run_eps(cfg.material, eps, cfg.cells, cfg.datum, grid);
  with_output(g.out, [&](std::ostream& os) { write_eps_csv(os, traj, cfg.material); });
  return 0;
}

int run_simulate_limit(const GlobalOptions& g) {
  const auto cfg = resolve_config(g);
  const auto grid = uniform_time_grid(cfg.datum, cfg.steps);
  const auto traj = run_limit(cfg.material, cfg.datum, grid);
  with_output(g.out, [&](std::ostream& os) { write_limit_csv(os, traj, cfg.material); });
  return 0;
}

int run_classify(const GlobalOptions& g) {
  const auto cfg = resolve_config(g);
  const auto grid = uniform_time_grid(cfg.datum, cfg.steps);
  const auto traj = run_limit(cfg.material, cfg.datum, grid);
  const auto cls = cns_classify(cfg.datum, cfg.material, traj);
  const auto consistency = classifier_consistency(traj, cfg.material, cls.verdict);

  double max_residual = 0.0;
  for (double r : energy_balance_residuals(traj, cfg.material)) {
    max_residual = std::max(max_residual, r);
  }
  std::size_t violations = 0;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    if (flow_rule_residual(traj, cfg.material, k) > 1e-9) ++violations;
  }
  const double w0 = cfg.datum.left().front();
  const double wL = cfg.datum.right().front();
  const auto gamma = static_gamma_check(cfg.material, w0, wL, 1000, cfg.cells, cfg.seed);

  nlohmann::json j;
  j["verdict"] = std::string(to_string(cls.verdict));
  j["witness_pair"] = cls.witness ? nlohmann::json::array({cls.witness->s, cls.witness->t})
                                  : nlohmann::json(nullptr);
  j["t0"] = cls.t0;
  j["t0_star"] = cls.t0_star;
  j["max_eb_residual"] = max_residual;
  j["flow_rule_violations"] = violations;
  j["consistent"] = consistency.consistent;
  if (!consistency.consistent) j["consistency_message"] = consistency.message;
  j["static_gamma"] = {{"competitors", gamma.competitors},
                       {"initial_energy", gamma.initial_energy},
                       {"min_competitor_energy", gamma.min_energy},
                       {"seed", cfg.seed}};
  with_output(g.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

int run_sweep(const GlobalOptions& g) {
  const auto cfg = resolve_config(g);
  const auto report = sweep_eps(cfg);
  with_output(g.out, [&](std::ostream& os) { write_sweep_csv(os, report); });
  std::cerr << "monotone: sigma=" << (report.sigma_monotone ? "yes" : "no")
            << " l=" << (report.damage_monotone ? "yes" : "no")
            << " energy=" << (report.energy_monotone ? "yes" : "no") << '\n';
  return 0;
}

int run_emit_figures(const GlobalOptions& g) {
  const auto cfg = resolve_config(g);
  const auto grid = uniform_time_grid(cfg.datum, cfg.steps);
  const auto traj = run_limit(cfg.material, cfg.datum, grid);
  const std::string dir = g.out.empty() ? cfg.output_dir : g.out;
  for (const auto& path : emit_figures(cfg, traj, dir)) std::cout << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"damagelab: brittle damage versus perfect plasticity in a 1D bar"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "scenario configuration (JSON)");
  app.add_option("--preset", g.preset, "named scenario (see preset-list)");
  app.add_option("--out", g.out, "output file (directory for emit-figures)");
  app.add_option("--steps", g.steps, "number of uniform time steps");
  app.add_option("--cells", g.cells, "number of cells of the eps-model");
  app.add_option("--seed", g.seed, "seed for randomized competitor families");
  app.add_option("--eps", g.eps, "eps value(s); overrides eps_list");

  auto* sim_eps = app.add_subcommand("simulate-eps", "run the eps-model, CSV output");
  auto* sim_lim = app.add_subcommand("simulate-limit", "run the limit model, CSV output");
  auto* classify = app.add_subcommand("classify", "plasticity/damage verdict as JSON");
  auto* sweep = app.add_subcommand("sweep-eps", "sup-norm deviations along eps_list, CSV");
  auto* figures = app.add_subcommand("emit-figures", "write figure tables into --out dir");
  auto* presets = app.add_subcommand("preset-list", "list the built-in scenarios");

  auto* table = app.add_subcommand("envelope-table", "convex envelope of a two-well density");
  double a = 0.1, b = 1.0, K = 2.0, xi_min = 0.0, xi_max = 6.0;
  std::size_t n = 601;
  table->add_option("--a", a, "weak-well stiffness")->capture_default_str();
  table->add_option("--b", b, "strong-well stiffness")->capture_default_str();
  table->add_option("--K", K, "weak-well offset")->capture_default_str();
  table->add_option("--xi-min", xi_min)->capture_default_str();
  table->add_option("--xi-max", xi_max)->capture_default_str();
  table->add_option("--n", n, "number of points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim_eps) return run_simulate_eps(g);
    if (*sim_lim) return run_simulate_limit(g);
    if (*classify) return run_classify(g);
    if (*sweep) return run_sweep(g);
    if (*figures) return run_emit_figures(g);
    if (*presets) {
      for (const auto& p : preset_catalog()) std::cout << p.name << '\t' << p.description << '\n';
      return 0;
    }
    if (*table) {
      with_output(g.out, [&](std::ostream& os) { write_envelope_table(os, a, b, K, xi_min, xi_max, n); });
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
