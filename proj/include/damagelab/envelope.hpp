#pragma once

// Closed-form energetics of the two-phase material in one dimension.

#include <span>

#include "damagelab/material.hpp"

namespace damagelab {

/// Two-well density f(xi) = min(K + a xi^2, b xi^2) with 0 < a < b, K > 0.
/// `a` belongs to the weak (offset) well, `b` to the strong well at the origin.
struct TwoWellParams {
  double a;
  double b;
  double K;

  /// Throws std::invalid_argument unless 0 < a < b and K > 0.
  TwoWellParams(double a_weak, double b_strong, double offset);
};

/// Kink strains of the convex envelope and its slope on the affine segment.
struct EnvelopeKinks {
  double xi1;
  double xi2;
  double plateau_slope;
};

[[nodiscard]] double raw_energy(const TwoWellParams& p, double xi);

/// Convex envelope of raw_energy: b xi^2 up to xi1, affine up to xi2, then
/// K + a xi^2. At |xi| == xi1 or xi2 the quadratic branch is used.
[[nodiscard]] double convex_envelope(const TwoWellParams& p, double xi);

/// d/dxi of convex_envelope (the envelope is C^1).
[[nodiscard]] double envelope_derivative(const TwoWellParams& p, double xi);

[[nodiscard]] EnvelopeKinks envelope_slope_bounds(const TwoWellParams& p);

/// Weak-phase fraction theta in [0,1] minimizing
///   K theta + (theta/a + (1-theta)/b)^{-1} xi^2.
/// On the affine segment the optimal mixture half-stiffness m satisfies
/// m |xi| = sqrt(a b K / (b - a)).
[[nodiscard]] double optimal_theta(const TwoWellParams& p, double xi);

/// Effective stiffness of a laminate with weak-phase fraction theta:
/// the harmonic mean a_weak a_strong / (theta a_strong + (1-theta) a_weak).
/// Throws std::invalid_argument if theta is outside [0,1] or the stiffnesses
/// are not ordered 0 < a_weak <= a_strong.
[[nodiscard]] double gclosure_1d(double theta, double a_weak, double a_strong);

/// Two-well density seen by a cell of the eps-model with sound fraction
/// `sound` and stiffness `stiffness`: weak well kappa*sound/eps + eps a0 xi^2/2,
/// strong well stiffness xi^2/2. Requires sound > 0 and stiffness > eps a0.
[[nodiscard]] TwoWellParams eps_cell_wells(const MaterialParams& m, double eps,
                                           double sound, double stiffness);

/// Limit elastic-plastic density inf_eta { a1/2 |xi - eta|^2 + s* |eta| }
/// in closed (Huber) form.
[[nodiscard]] double wbar_1d(const MaterialParams& m, double xi);

/// Constraint function G evaluated on the ascending eigenvalues of a
/// symmetric stress, for isotropic weak-phase Lame moduli (lambda0, mu0).
/// Throws std::invalid_argument on empty or unsorted input or non-positive moduli.
[[nodiscard]] double g_constraint(std::span<const double> tau_sorted, double lambda0,
                                  double mu0);

/// |sigma| <= s*; the boundary of K counts as inside.
[[nodiscard]] bool in_yield_set(const MaterialParams& m, double sigma);

/// Support function of K: s* |q|.
[[nodiscard]] double support_1d(const MaterialParams& m, double q);

}  // namespace damagelab
