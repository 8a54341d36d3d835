#pragma once

// Effective (eps -> 0) evolution in closed form. The bar behaves as an
// elastic body of stiffness a1 in series with a damage mass l >= 0 of
// compliance l/a0:
//   J = sigma (l/a0 + L/a1),   |sigma| <= s*,   l nondecreasing,
// and l grows only while |sigma| = s*.

#include <cstddef>
#include <span>
#include <vector>

#include "damagelab/boundary.hpp"
#include "damagelab/material.hpp"

namespace damagelab {

struct LimitState {
  double t = 0.0;
  double jump = 0.0;
  double sigma = 0.0;
  double damage_mass = 0.0;         ///< l = mu([0,L])
  double energy = 0.0;              ///< J sigma / 2 + kappa l
  double elastic_strain = 0.0;      ///< sigma / a1
  double plastic_mass = 0.0;        ///< p([0,L]) = sigma l / a0
  double damage_density = 0.0;      ///< l / L (uniform spatial distribution)
  double compliance_density = 0.0;  ///< damage_density / a0 + 1 / a1
};

/// State at t = 0: purely elastic when |a1 J0 / L| <= s*, otherwise saturated
/// with l(0) = a0 (|J0|/s* - L/a1).
[[nodiscard]] LimitState initial_limit_state(const MaterialParams& m, double jump,
                                             double t = 0.0);

/// (L a1 / 2) e^2 + s* |p|([0,L]): the second route to the initial energy.
[[nodiscard]] double elastic_plus_plastic_energy(const LimitState& s, const MaterialParams& m);

/// Return mapping l_new = max(l_prev, a0 (|J|/s* - L/a1)), then
/// sigma = J / (l_new/a0 + L/a1). When l grows the stress is set to
/// exactly +-s*.
[[nodiscard]] LimitState limit_step(const LimitState& prev, const MaterialParams& m,
                                    double jump, double t);

struct LimitTrajectory {
  std::vector<LimitState> states;
  /// E(0) + cumulative trapezoidal sum of sigma dJ.
  std::vector<double> energy_integrated;
  double t0 = 0.0;       ///< last recorded instant with l = 0 (0 if l(0) > 0)
  double t0_star = 0.0;  ///< first recorded instant with |J| > s* L / a1 (T if none)
};

/// Sequential limit_step over `time_grid`, which must refine the datum.
[[nodiscard]] LimitTrajectory run_limit(const MaterialParams& m, const BoundaryDatum& w,
                                        std::span<const double> time_grid);

/// Discriminant (E/a0 + kappa L/a1)^2 - (2 kappa/a0) J^2. Values within
/// rounding of zero (saturated states) are returned as exactly 0.
[[nodiscard]] double energy_discriminant(double energy, double jump, const MaterialParams& m);

/// Damage mass recovered from energy and jump alone:
///   l = (a0 / 2 kappa) (E/a0 - kappa L/a1 + sqrt(discriminant)).
[[nodiscard]] double damage_mass_from_energy(double energy, double jump,
                                             const MaterialParams& m);

/// Displacement and strain decomposition of a limit state.
struct LimitFields {
  double u_left = 0.0;        ///< u(0+)
  double u_right = 0.0;       ///< u(L-)
  double slope = 0.0;         ///< u' = sigma (l/(a0 L) + 1/a1)
  double elastic_density = 0.0;
  double plastic_density = 0.0;
  double boundary_mass_left = 0.0;   ///< (w - u)(0), the plastic mass on {0}
  double boundary_mass_right = 0.0;  ///< (w - u)(L)
  double total_variation = 0.0;      ///< |Du|((0,L))
};

/// Affine displacement anchored at u(0) = w0. `w0`, `wL` are the traces at s.t.
[[nodiscard]] LimitFields limit_fields(const LimitState& s, const MaterialParams& m, double w0,
                                       double wL);

}  // namespace damagelab
