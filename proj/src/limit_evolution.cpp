#include "damagelab/limit_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace damagelab {

namespace {

LimitState make_state(const MaterialParams& m, double t, double jump, double sigma, double l) {
  LimitState s;
  s.t = t;
  s.jump = jump;
  s.sigma = sigma;
  s.damage_mass = l;
  s.energy = 0.5 * jump * sigma + m.kappa * l;
  s.elastic_strain = sigma / m.a1;
  s.plastic_mass = sigma * l / m.a0;
  s.damage_density = l / m.length;
  s.compliance_density = s.damage_density / m.a0 + 1.0 / m.a1;
  return s;
}

// Damage mass at which the bar carries |jump| exactly at the yield stress.
double saturation_mass(const MaterialParams& m, double jump) {
  return m.a0 * (std::abs(jump) / m.yield_stress() - m.length / m.a1);
}

LimitState relax(const MaterialParams& m, double t, double jump, double l_prev) {
  const double needed = saturation_mass(m, jump);
  if (needed > l_prev) {
    return make_state(m, t, jump, std::copysign(m.yield_stress(), jump), needed);
  }
  const double sigma = jump / (l_prev / m.a0 + m.length / m.a1);
  return make_state(m, t, jump, sigma, l_prev);
}

}  // namespace

LimitState initial_limit_state(const MaterialParams& m, double jump, double t) {
  m.validate();
  return relax(m, t, jump, 0.0);
}

double elastic_plus_plastic_energy(const LimitState& s, const MaterialParams& m) {
  return 0.5 * m.length * m.a1 * s.elastic_strain * s.elastic_strain +
         m.yield_stress() * std::abs(s.plastic_mass);
}

LimitState limit_step(const LimitState& prev, const MaterialParams& m, double jump, double t) {
  return relax(m, t, jump, prev.damage_mass);
}

LimitTrajectory run_limit(const MaterialParams& m, const BoundaryDatum& w,
                          std::span<const double> time_grid) {
  m.validate();
  require_refines(time_grid, w);

  LimitTrajectory traj;
  traj.states.reserve(time_grid.size());
  traj.energy_integrated.reserve(time_grid.size());

  traj.states.push_back(initial_limit_state(m, w.jump_at(time_grid[0]), time_grid[0]));
  traj.energy_integrated.push_back(traj.states.front().energy);
  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    const auto& prev = traj.states.back();
    auto next = limit_step(prev, m, w.jump_at(time_grid[k]), time_grid[k]);
    traj.energy_integrated.push_back(traj.energy_integrated.back() +
                                     0.5 * (prev.sigma + next.sigma) * (next.jump - prev.jump));
    traj.states.push_back(next);
  }

  const double threshold = m.elastic_jump_limit();
  traj.t0 = time_grid.back();
  if (traj.states.front().damage_mass > 0.0) {
    traj.t0 = time_grid.front();
  } else {
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      if (traj.states[k].damage_mass > 0.0) {
        traj.t0 = traj.states[k - 1].t;
        break;
      }
    }
  }
  traj.t0_star = time_grid.back();
  for (const auto& s : traj.states) {
    if (std::abs(s.jump) > threshold) {
      traj.t0_star = s.t;
      break;
    }
  }
  return traj;
}

double energy_discriminant(double energy, double jump, const MaterialParams& m) {
  // The discriminant vanishes on saturated states, where the difference of
  // squares cancels catastrophically; evaluate it in extended precision and
  // treat anything within rounding of zero as zero.
  using ext = long double;
  const ext first = static_cast<ext>(energy) / m.a0 + static_cast<ext>(m.kappa) * m.length / m.a1;
  const ext second = std::sqrt(static_cast<ext>(2.0) * m.kappa / m.a0) * std::abs(jump);
  const ext value = (first - second) * (first + second);
  const ext scale = first * first + second * second;
  const ext noise = 64.0L * static_cast<ext>(std::numeric_limits<double>::epsilon()) * scale;
  if (std::abs(value) <= noise) {
    return 0.0;
  }
  return static_cast<double>(value);
}

double damage_mass_from_energy(double energy, double jump, const MaterialParams& m) {
  const double disc = std::max(0.0, energy_discriminant(energy, jump, m));
  return m.a0 / (2.0 * m.kappa) *
         (energy / m.a0 - m.kappa * m.length / m.a1 + std::sqrt(disc));
}

LimitFields limit_fields(const LimitState& s, const MaterialParams& m, double w0, double wL) {
  LimitFields f;
  f.slope = s.sigma * (s.damage_mass / (m.a0 * m.length) + 1.0 / m.a1);
  f.elastic_density = s.elastic_strain;
  f.plastic_density = s.plastic_mass / m.length;
  f.u_left = w0;
  f.u_right = w0 + f.slope * m.length;
  f.boundary_mass_left = w0 - f.u_left;
  f.boundary_mass_right = wL - f.u_right;
  f.total_variation = std::abs(f.slope) * m.length;
  return f;
}

}  // namespace damagelab
