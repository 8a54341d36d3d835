#include "damagelab/eps_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "damagelab/envelope.hpp"

namespace damagelab {

namespace {

constexpr double kStressTolerance = 1e-12;
constexpr int kMaxBisectionIterations = 200;

struct StepContext {
  double cell_width;
  double weak_stiffness;  // eps a0
  double plateau;         // s* L_eps, common plateau stress of every cell with sound material
};

bool exhausted(const CellState& c, double weak_stiffness) {
  return !(c.sound > 0.0) || !(c.stiffness > weak_stiffness);
}

// Strain of one cell under stress sigma >= 0 off the plateau.
double branch_strain(const CellState& c, const StepContext& ctx, double sigma) {
  if (exhausted(c, ctx.weak_stiffness) || sigma < ctx.plateau) {
    return sigma / c.stiffness;
  }
  return sigma / ctx.weak_stiffness;
}

double aggregate_strain(std::span<const CellState> cells, const StepContext& ctx, double sigma) {
  double total = 0.0;
  for (const auto& c : cells) total += branch_strain(c, ctx, sigma) * ctx.cell_width;
  return total;
}

// Integral of the branch compliance at sigma; the aggregate strain map is
// linear in sigma on either side of the plateau.
double aggregate_compliance(std::span<const CellState> cells, const StepContext& ctx,
                            bool above_plateau) {
  double total = 0.0;
  for (const auto& c : cells) {
    const bool weak = above_plateau && !exhausted(c, ctx.weak_stiffness);
    total += ctx.cell_width / (weak ? ctx.weak_stiffness : c.stiffness);
  }
  return total;
}

// Uniform extra strain for the plateau cells, capped per cell (water filling).
double plateau_fill_level(std::vector<double> capacities, double residual_strain_sum) {
  std::sort(capacities.begin(), capacities.end());
  double level = 0.0;
  double remaining = residual_strain_sum;
  auto open = static_cast<double>(capacities.size());
  for (double cap : capacities) {
    const double need = (cap - level) * open;
    if (need >= remaining) {
      return level + remaining / open;
    }
    remaining -= need;
    level = cap;
    open -= 1.0;
  }
  return level;
}

double solve_stress_off_plateau(std::span<const CellState> cells, const StepContext& ctx,
                                double target, double bracket) {
  if (aggregate_strain(cells, ctx, bracket) < target) {
    std::ostringstream msg;
    msg << "stress bisection: bracket [0, " << bracket << "] does not enclose the root";
    throw NumericalError(msg.str());
  }
  double lo = 0.0;
  double hi = bracket;
  int iter = 0;
  while (hi - lo > kStressTolerance && iter < kMaxBisectionIterations) {
    const double mid = 0.5 * (lo + hi);
    if (aggregate_strain(cells, ctx, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iter;
  }
  if (hi - lo > kStressTolerance) {
    throw NumericalError("stress bisection did not converge within 200 iterations");
  }
  const double bisected = 0.5 * (lo + hi);
  // Solve the linear branch exactly so the strains sum to the jump to rounding.
  const bool above = bisected >= ctx.plateau;
  const double exact = target / aggregate_compliance(cells, ctx, above);
  if ((exact >= ctx.plateau) == above && std::abs(exact - bisected) <= 1e3 * kStressTolerance) {
    return exact;
  }
  return bisected;
}

}  // namespace

EpsState pristine_state(const MaterialParams& m, double eps, std::size_t n_cells) {
  m.validate();
  (void)m.plateau_factor(eps);
  if (n_cells == 0) {
    throw std::invalid_argument("pristine_state: at least one cell is required");
  }
  EpsState s;
  s.epsilon = eps;
  s.cells.assign(n_cells, CellState{1.0, m.a1, 0.0, 0.0});
  return s;
}

EpsState initial_step(const MaterialParams& m, double eps, std::size_t n_cells, double jump) {
  auto s = incremental_step(pristine_state(m, eps, n_cells), m, jump);
  s.step = 0;
  return s;
}

EpsState incremental_step(const EpsState& prev, const MaterialParams& m, double jump) {
  if (prev.cells.empty()) {
    throw std::invalid_argument("incremental_step: state has no cells");
  }
  if (!std::isfinite(jump)) {
    throw std::invalid_argument("incremental_step: jump must be finite");
  }
  const double eps = prev.epsilon;
  const StepContext ctx{m.length / static_cast<double>(prev.cells.size()), eps * m.a0,
                        m.yield_stress() * m.plateau_factor(eps)};
  const double sign = jump < 0.0 ? -1.0 : 1.0;
  const double target = std::abs(jump);

  // Strain interval reachable at exactly the plateau stress.
  double plateau_low = 0.0;
  double plateau_high = 0.0;
  bool any_active = false;
  for (const auto& c : prev.cells) {
    plateau_low += ctx.plateau / c.stiffness * ctx.cell_width;
    if (exhausted(c, ctx.weak_stiffness)) {
      plateau_high += ctx.plateau / c.stiffness * ctx.cell_width;
    } else {
      any_active = true;
      plateau_high += ctx.plateau / ctx.weak_stiffness * ctx.cell_width;
    }
  }

  EpsState next;
  next.epsilon = eps;
  next.step = prev.step + 1;
  next.cells = prev.cells;

  const bool on_plateau = any_active && plateau_low <= target && target <= plateau_high;
  double stress = 0.0;
  double fill = 0.0;
  if (on_plateau) {
    stress = ctx.plateau;
    std::vector<double> capacities;
    for (const auto& c : prev.cells) {
      if (!exhausted(c, ctx.weak_stiffness)) {
        capacities.push_back(ctx.plateau / ctx.weak_stiffness - ctx.plateau / c.stiffness);
      }
    }
    fill = plateau_fill_level(std::move(capacities), (target - plateau_low) / ctx.cell_width);
  } else {
    const double bracket = ctx.plateau + m.a1 * target / m.length;
    stress = solve_stress_off_plateau(prev.cells, ctx, target, bracket);
  }
  next.sigma = sign * stress;

  for (std::size_t i = 0; i < prev.cells.size(); ++i) {
    const CellState& old = prev.cells[i];
    CellState& cell = next.cells[i];
    cell.theta_step = 0.0;
    if (exhausted(old, ctx.weak_stiffness)) {
      cell.strain = next.sigma / old.stiffness;
      continue;
    }
    double magnitude = 0.0;
    double theta = 0.0;
    if (on_plateau) {
      const double base = ctx.plateau / old.stiffness;
      magnitude = base + std::min(fill, ctx.plateau / ctx.weak_stiffness - base);
      theta = optimal_theta(eps_cell_wells(m, eps, old.sound, old.stiffness), magnitude);
    } else if (stress < ctx.plateau) {
      magnitude = stress / old.stiffness;
    } else {
      magnitude = stress / ctx.weak_stiffness;
      theta = 1.0;
    }
    cell.strain = sign * magnitude;
    cell.theta_step = theta;
    cell.sound = theta == 1.0 ? 0.0 : (1.0 - theta) * old.sound;
    cell.stiffness = gclosure_1d(theta, ctx.weak_stiffness, old.stiffness);
  }
  return next;
}

double total_energy(const EpsState& s, const MaterialParams& m) {
  const double dx = m.length / static_cast<double>(s.cells.size());
  double stored = 0.0;
  double damaged = 0.0;
  for (const auto& c : s.cells) {
    const double strain = s.sigma / c.stiffness;
    stored += 0.5 * c.stiffness * strain * strain;
    damaged += 1.0 - c.sound;
  }
  return (stored + m.kappa / s.epsilon * damaged) * dx;
}

double damage_mass(const EpsState& s, const MaterialParams& m) {
  const double dx = m.length / static_cast<double>(s.cells.size());
  double total = 0.0;
  for (const auto& c : s.cells) total += (1.0 - c.sound) / s.epsilon;
  return total * dx;
}

double mean_sound_fraction(const EpsState& s) {
  double total = 0.0;
  for (const auto& c : s.cells) total += c.sound;
  return total / static_cast<double>(s.cells.size());
}

double carried_jump(const EpsState& s, const MaterialParams& m) {
  const double dx = m.length / static_cast<double>(s.cells.size());
  double compliance = 0.0;
  for (const auto& c : s.cells) compliance += dx / c.stiffness;
  return s.sigma * compliance;
}

DerivedFields derived_fields(const EpsState& s, const MaterialParams& m) {
  DerivedFields out;
  out.elastic.reserve(s.cells.size());
  out.plastic.reserve(s.cells.size());
  out.damage_density.reserve(s.cells.size());
  for (const auto& c : s.cells) {
    out.elastic.push_back(s.sigma * c.sound / m.a1);
    out.plastic.push_back(s.sigma * (1.0 - c.sound) / (s.epsilon * m.a0));
    out.damage_density.push_back((1.0 - c.sound) / s.epsilon);
  }
  return out;
}

std::optional<std::string> check_state(const EpsState& s, const MaterialParams& m, double tol) {
  const double weak = s.epsilon * m.a0;
  bool any_sound = false;
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const auto& c = s.cells[i];
    std::ostringstream where;
    where << "cell " << i << ": ";
    if (!(c.sound >= 0.0 && c.sound <= 1.0)) {
      return where.str() + "sound fraction outside [0,1]";
    }
    if (c.stiffness < weak * (1.0 - tol) || c.stiffness > m.a1 * (1.0 + tol)) {
      return where.str() + "stiffness outside [eps a0, a1]";
    }
    const double identity = 1.0 / ((1.0 - c.sound) / weak + c.sound / m.a1);
    if (std::abs(identity - c.stiffness) > tol) {
      return where.str() + "stiffness identity violated";
    }
    if (std::abs(c.stiffness * c.strain - s.sigma) > tol * std::max(1.0, std::abs(s.sigma))) {
      return where.str() + "cell stress differs from the homogeneous stress";
    }
    any_sound = any_sound || c.stiffness > weak;
  }
  const double plateau = m.yield_stress() * m.plateau_factor(s.epsilon);
  if (any_sound && std::abs(s.sigma) > plateau * (1.0 + tol)) {
    return std::string("stress exceeds the plateau bound s* L_eps");
  }
  return std::nullopt;
}

std::optional<std::string> check_monotone(const EpsState& prev, const EpsState& next) {
  if (prev.cells.size() != next.cells.size()) {
    return std::string("cell count changed between states");
  }
  for (std::size_t i = 0; i < prev.cells.size(); ++i) {
    if (next.cells[i].sound > prev.cells[i].sound) {
      return "cell " + std::to_string(i) + ": sound fraction increased";
    }
    if (next.cells[i].stiffness > prev.cells[i].stiffness) {
      return "cell " + std::to_string(i) + ": stiffness increased";
    }
  }
  return std::nullopt;
}

EpsTrajectory run_eps(const MaterialParams& m, double eps, std::size_t n_cells,
                      const BoundaryDatum& w, std::span<const double> time_grid) {
  m.validate();
  require_refines(time_grid, w);

  EpsTrajectory traj;
  traj.epsilon = eps;
  traj.records.reserve(time_grid.size());

  auto fail = [](std::size_t k, double t, const std::string& what) -> NumericalError {
    std::ostringstream msg;
    msg << "eps evolution failed at step " << k << " (t = " << t << "): " << what;
    return NumericalError(msg.str());
  };

  double work_bound = 0.0;
  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    const double j0 = w.jump_at(time_grid[k - 1]);
    const double j1 = w.jump_at(time_grid[k]);
    work_bound += std::max(std::abs(j0), std::abs(j1)) * std::abs(j1 - j0);
  }
  work_bound *= m.a1 / m.length;

  EpsState state;
  try {
    state = initial_step(m, eps, n_cells, w.jump_at(time_grid[0]));
  } catch (const NumericalError& e) {
    throw fail(0, time_grid[0], e.what());
  }
  if (auto bad = check_state(state, m)) throw fail(0, time_grid[0], *bad);

  const double e0 = total_energy(state, m);
  traj.energy_bound = e0 + work_bound;
  const double stress_bound = std::sqrt(2.0 * m.a1 * traj.energy_bound / m.length);
  traj.records.push_back({time_grid[0], w.jump_at(time_grid[0]), state, e0, 0.0, 0.0});

  double work = 0.0;
  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    const double t = time_grid[k];
    const double jump = w.jump_at(t);
    EpsState next;
    try {
      next = incremental_step(state, m, jump);
    } catch (const NumericalError& e) {
      throw fail(k, t, e.what());
    }
    next.step = k;
    if (auto bad = check_state(next, m)) throw fail(k, t, *bad);
    if (auto bad = check_monotone(state, next)) throw fail(k, t, *bad);

    work += 0.5 * (state.sigma + next.sigma) * (jump - traj.records.back().jump);
    const double energy = total_energy(next, m);
    if (energy > traj.energy_bound * (1.0 + 1e-12) + 1e-9) {
      throw fail(k, t, "energy exceeds the uniform bound");
    }
    if (std::abs(next.sigma) > stress_bound * (1.0 + 1e-12) + 1e-12) {
      throw fail(k, t, "stress exceeds the uniform bound");
    }
    traj.records.push_back({t, jump, next, energy, work, energy - e0 - work});
    state = std::move(next);
  }
  return traj;
}

}  // namespace damagelab
