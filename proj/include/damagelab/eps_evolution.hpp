#pragma once

// Time-incremental brittle-damage evolution of a 1D bar at fixed eps.
//
// Each cell carries the sound volume fraction Theta and the homogenized
// stiffness a of its fine mixture, always tied by
//   1/a = (1 - Theta)/(eps a0) + Theta/a1.
// A load step minimizes, cell by cell, the relaxed two-well energy built on
// the previous state subject to the strains summing to the prescribed jump.
// The stress is a single scalar (the Lagrange multiplier of that constraint).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "damagelab/boundary.hpp"
#include "damagelab/material.hpp"

namespace damagelab {

struct CellState {
  double sound = 1.0;       ///< Theta in [0,1]
  double stiffness = 0.0;   ///< a in [eps a0, a1]
  double strain = 0.0;      ///< u' on the cell
  double theta_step = 0.0;  ///< fraction of the sound phase damaged by the last step
};

struct EpsState {
  double epsilon = 0.0;
  double sigma = 0.0;
  std::size_t step = 0;
  std::vector<CellState> cells;
};

/// Undamaged, unloaded bar: Theta = 1, a = a1, zero strain.
[[nodiscard]] EpsState pristine_state(const MaterialParams& m, double eps, std::size_t n_cells);

/// Minimizer of the first incremental problem: incremental_step applied to
/// the pristine state.
[[nodiscard]] EpsState initial_step(const MaterialParams& m, double eps, std::size_t n_cells,
                                    double jump);

/// One load step to boundary jump `jump`. Throws NumericalError if the
/// stress bisection fails to converge and std::invalid_argument on an empty
/// or inconsistent previous state.
[[nodiscard]] EpsState incremental_step(const EpsState& prev, const MaterialParams& m,
                                        double jump);

/// sum (a/2)(sigma/a)^2 dx + (kappa/eps) sum (1 - Theta) dx.
[[nodiscard]] double total_energy(const EpsState& s, const MaterialParams& m);

/// l_eps = integral of (1 - Theta)/eps.
[[nodiscard]] double damage_mass(const EpsState& s, const MaterialParams& m);

[[nodiscard]] double mean_sound_fraction(const EpsState& s);

/// sigma * integral of 1/a, i.e. the jump carried by the state.
[[nodiscard]] double carried_jump(const EpsState& s, const MaterialParams& m);

/// Per-cell elastic strain e = sigma Theta / a1, plastic strain
/// p = sigma (1 - Theta)/(eps a0) and damage density mu = (1 - Theta)/eps.
struct DerivedFields {
  std::vector<double> elastic;
  std::vector<double> plastic;
  std::vector<double> damage_density;
};

[[nodiscard]] DerivedFields derived_fields(const EpsState& s, const MaterialParams& m);

/// Stiffness identity, bounds on Theta and a, per-cell stress consistency and
/// the plateau bound |sigma| <= s* L_eps while any sound material remains.
/// Returns a description of the first violation.
[[nodiscard]] std::optional<std::string> check_state(const EpsState& s, const MaterialParams& m,
                                                     double tol = 1e-12);

/// Theta and a must not increase from `prev` to `next`.
[[nodiscard]] std::optional<std::string> check_monotone(const EpsState& prev,
                                                        const EpsState& next);

struct EpsRecord {
  double t = 0.0;
  double jump = 0.0;
  EpsState state;
  double energy = 0.0;
  double work = 0.0;         ///< cumulative trapezoidal sum of sigma dJ
  double eb_residual = 0.0;  ///< energy - energy(0) - work
};

struct EpsTrajectory {
  double epsilon = 0.0;
  std::vector<EpsRecord> records;
  /// Uniform energy bound E(0) + (a1/L) sum max|J| |dJ|, checked on every step.
  double energy_bound = 0.0;
};

/// Runs the incremental scheme on `time_grid`, which must refine the datum's
/// sample instants. Every step is checked against check_state, check_monotone
/// and the uniform energy/stress bounds; a violation or a failed step throws
/// NumericalError naming the step index and time.
[[nodiscard]] EpsTrajectory run_eps(const MaterialParams& m, double eps, std::size_t n_cells,
                                    const BoundaryDatum& w, std::span<const double> time_grid);

}  // namespace damagelab
