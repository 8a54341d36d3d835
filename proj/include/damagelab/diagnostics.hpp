#pragma once

// Certificates for a computed limit evolution: plastic dissipation, the
// perfect-plasticity energy balance, the flow rule, the boundary-datum
// criterion that separates plasticity from damage, and the static
// elastic-plastic functional at the initial time.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "damagelab/boundary.hpp"
#include "damagelab/limit_evolution.hpp"
#include "damagelab/material.hpp"

namespace damagelab {

enum class Verdict { PerfectPlasticity, DamageOnly };

[[nodiscard]] std::string_view to_string(Verdict v);

/// s* times the total variation of the plastic mass over the recorded
/// instants lying in [s, t]. Requires s <= t.
[[nodiscard]] double dissipation(const LimitTrajectory& traj, const MaterialParams& m, double s,
                                 double t);

/// Cumulative dissipation from the first instant, one value per state.
[[nodiscard]] std::vector<double> dissipation_series(const LimitTrajectory& traj,
                                                     const MaterialParams& m);

/// Cumulative trapezoidal work sum sigma_bar dJ, one value per state.
[[nodiscard]] std::vector<double> work_series(const LimitTrajectory& traj);

/// R(t_k) = (L a1/2)(e_k^2 - e_0^2) + Diss(0, t_k) - work(t_k).
/// Nonnegative up to rounding; zero exactly when the evolution is perfectly
/// plastic up to t_k.
[[nodiscard]] double plasticity_energy_balance_residual(const LimitTrajectory& traj,
                                                        const MaterialParams& m, std::size_t k);

[[nodiscard]] std::vector<double> energy_balance_residuals(const LimitTrajectory& traj,
                                                           const MaterialParams& m);

/// Closed form of R(t_k) for the limit evolution:
///   s* V(p; 0, t_k) - s* (|p_k| - |p_0|) - (s* - |sigma_k|)^2 l_k / (2 a0).
[[nodiscard]] double residual_closed_form(const LimitTrajectory& traj, const MaterialParams& m,
                                          std::size_t k);

/// s* |dp| - sigma_k dp over step k (k >= 1). Nonnegative up to rounding.
[[nodiscard]] double flow_rule_residual(const LimitTrajectory& traj, const MaterialParams& m,
                                        std::size_t k);

/// (L a1/2)(e_k^2 - e_0^2) + sum sigma_bar dp - sum sigma_bar dJ for every k.
/// Holds for every evolution regardless of the verdict.
[[nodiscard]] std::vector<double> fake_energy_balance_residuals(const LimitTrajectory& traj,
                                                                const MaterialParams& m);

struct WitnessPair {
  double s = 0.0;
  double t = 0.0;
};

struct Classification {
  Verdict verdict = Verdict::PerfectPlasticity;
  std::optional<WitnessPair> witness;
  double t0 = 0.0;       ///< last recorded instant of the trajectory with l = 0
  double t0_star = 0.0;  ///< inf{t : |J(t)| > s* L / a1}, T if the set is empty
};

/// Scans the datum for s < t with |J(t)| < |J(s)| and |J(t)| > s* L / a1.
/// Sample instants and segment interiors are both examined, which is exact
/// for piecewise-linear data. Returns the first witness found in time order.
[[nodiscard]] std::optional<WitnessPair> find_cns_witness(const BoundaryDatum& w,
                                                          const MaterialParams& m);

/// Exact first crossing inf{t : |J(t)| > s* L / a1} of the piecewise-linear
/// datum; T when |J| never exceeds the threshold.
[[nodiscard]] double first_threshold_crossing(const BoundaryDatum& w, const MaterialParams& m);

/// Classifies the datum and attaches t0 from `traj` (computed on the same
/// datum). Throws NumericalError if t0 and t0* differ by more than the local
/// time step.
[[nodiscard]] Classification cns_classify(const BoundaryDatum& w, const MaterialParams& m,
                                          const LimitTrajectory& traj);

/// Convenience overload running the limit solver on a uniform grid.
[[nodiscard]] Classification cns_classify(const BoundaryDatum& w, const MaterialParams& m,
                                          std::size_t steps = 400);

struct ConsistencyReport {
  bool consistent = true;
  Verdict by_saturation = Verdict::PerfectPlasticity;
  Verdict by_residual = Verdict::PerfectPlasticity;
  double max_residual = 0.0;
  double max_closed_form_error = 0.0;
  std::optional<double> first_inconsistent_t;
  std::string message;
};

/// Compares the datum verdict with two trajectory-based tests: saturation
/// |sigma| = s* at every recorded instant after t0 (tolerance 1e-9) and
/// max_t R(t) <= residual_tol. Also checks R against residual_closed_form.
[[nodiscard]] ConsistencyReport classifier_consistency(const LimitTrajectory& traj,
                                                       const MaterialParams& m, Verdict verdict,
                                                       double residual_tol = 1e-6);

struct InteriorJump {
  double x = 0.0;          ///< location in (0, L)
  double amplitude = 0.0;  ///< u(x+) - u(x-)
};

/// Piecewise-affine displacement on a uniform cell grid with a finite list of
/// interior jumps.
struct DiscreteDisplacement {
  double u_left = 0.0;          ///< u(0+)
  std::vector<double> slopes;   ///< u' on each cell
  std::vector<InteriorJump> jumps;

  /// u(L-) for a bar of length `length`.
  [[nodiscard]] double right_trace(double length) const;
};

/// Sum of wbar(u') dx + s* sum |jumps| + s* (|w(L) - u(L-)| + |w(0) - u(0+)|).
/// Throws std::invalid_argument on an empty cell list or a jump outside (0, L).
[[nodiscard]] double static_gamma_energy(const DiscreteDisplacement& u, const MaterialParams& m,
                                         double w0, double wL);

/// Competitors built from the affine interpolant, the slope-s*/a1 profile with
/// a jump, and random perturbations of slopes, jump placements and traces.
/// Deterministic in `seed`.
[[nodiscard]] std::vector<DiscreteDisplacement> random_competitors(const MaterialParams& m,
                                                                   double w0, double wL,
                                                                   std::size_t count,
                                                                   std::size_t cells,
                                                                   std::uint64_t seed);

struct StaticGammaReport {
  std::size_t competitors = 0;
  double initial_energy = 0.0;  ///< E(0) from initial_limit_state
  double min_energy = 0.0;      ///< smallest competitor energy
};

[[nodiscard]] StaticGammaReport static_gamma_check(const MaterialParams& m, double w0, double wL,
                                                   std::size_t count, std::size_t cells,
                                                   std::uint64_t seed);

}  // namespace damagelab
