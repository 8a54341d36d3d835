#include "damagelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "damagelab/envelope.hpp"

namespace damagelab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::PerfectPlasticity:
      return "PerfectPlasticity";
    case Verdict::DamageOnly:
      return "DamageOnly";
  }
  return "unknown";
}

double dissipation(const LimitTrajectory& traj, const MaterialParams& m, double s, double t) {
  if (s > t) {
    throw std::invalid_argument("dissipation: s must not exceed t");
  }
  double variation = 0.0;
  const LimitState* prev = nullptr;
  for (const auto& state : traj.states) {
    if (state.t < s || state.t > t) continue;
    if (prev != nullptr) variation += std::abs(state.plastic_mass - prev->plastic_mass);
    prev = &state;
  }
  return m.yield_stress() * variation;
}

std::vector<double> dissipation_series(const LimitTrajectory& traj, const MaterialParams& m) {
  std::vector<double> out(traj.states.size(), 0.0);
  for (std::size_t k = 1; k < out.size(); ++k) {
    out[k] = out[k - 1] + support_1d(m, traj.states[k].plastic_mass -
                                            traj.states[k - 1].plastic_mass);
  }
  return out;
}

std::vector<double> work_series(const LimitTrajectory& traj) {
  std::vector<double> out(traj.states.size(), 0.0);
  for (std::size_t k = 1; k < out.size(); ++k) {
    const auto& a = traj.states[k - 1];
    const auto& b = traj.states[k];
    out[k] = out[k - 1] + 0.5 * (a.sigma + b.sigma) * (b.jump - a.jump);
  }
  return out;
}

namespace {

double stored_elastic(const LimitState& s, const MaterialParams& m) {
  return 0.5 * m.length * m.a1 * s.elastic_strain * s.elastic_strain;
}

void require_index(const LimitTrajectory& traj, std::size_t k) {
  if (k >= traj.states.size()) {
    throw std::out_of_range("trajectory index out of range");
  }
}

}  // namespace

double plasticity_energy_balance_residual(const LimitTrajectory& traj, const MaterialParams& m,
                                          std::size_t k) {
  require_index(traj, k);
  double diss = 0.0;
  double work = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    const auto& a = traj.states[j - 1];
    const auto& b = traj.states[j];
    diss += support_1d(m, b.plastic_mass - a.plastic_mass);
    work += 0.5 * (a.sigma + b.sigma) * (b.jump - a.jump);
  }
  return stored_elastic(traj.states[k], m) - stored_elastic(traj.states.front(), m) + diss - work;
}

std::vector<double> energy_balance_residuals(const LimitTrajectory& traj,
                                             const MaterialParams& m) {
  const auto diss = dissipation_series(traj, m);
  const auto work = work_series(traj);
  std::vector<double> out(traj.states.size());
  const double e0 = stored_elastic(traj.states.front(), m);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = stored_elastic(traj.states[k], m) - e0 + diss[k] - work[k];
  }
  return out;
}

double residual_closed_form(const LimitTrajectory& traj, const MaterialParams& m,
                            std::size_t k) {
  require_index(traj, k);
  const double s_star = m.yield_stress();
  double variation = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    variation += std::abs(traj.states[j].plastic_mass - traj.states[j - 1].plastic_mass);
  }
  const auto& now = traj.states[k];
  const double gap = s_star - std::abs(now.sigma);
  return s_star * variation -
         s_star * (std::abs(now.plastic_mass) - std::abs(traj.states.front().plastic_mass)) -
         gap * gap * now.damage_mass / (2.0 * m.a0);
}

double flow_rule_residual(const LimitTrajectory& traj, const MaterialParams& m, std::size_t k) {
  require_index(traj, k);
  if (k == 0) {
    throw std::invalid_argument("flow_rule_residual: step index must be at least 1");
  }
  const double dp = traj.states[k].plastic_mass - traj.states[k - 1].plastic_mass;
  return support_1d(m, dp) - traj.states[k].sigma * dp;
}

std::vector<double> fake_energy_balance_residuals(const LimitTrajectory& traj,
                                                  const MaterialParams& m) {
  std::vector<double> out(traj.states.size(), 0.0);
  const double e0 = stored_elastic(traj.states.front(), m);
  double plastic_work = 0.0;
  double work = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const auto& a = traj.states[k - 1];
    const auto& b = traj.states[k];
    const double sigma_bar = 0.5 * (a.sigma + b.sigma);
    plastic_work += sigma_bar * (b.plastic_mass - a.plastic_mass);
    work += sigma_bar * (b.jump - a.jump);
    out[k] = stored_elastic(b, m) - e0 + plastic_work - work;
  }
  return out;
}

std::optional<WitnessPair> find_cns_witness(const BoundaryDatum& w, const MaterialParams& m) {
  const double threshold = m.elastic_jump_limit();
  const auto& times = w.times();
  const auto jumps = w.jumps();

  double running_max = -std::numeric_limits<double>::infinity();
  double argmax_t = 0.0;

  auto violates = [&](double v) { return v < running_max && v > threshold; };

  // |J| is linear between consecutive entries of `pieces` (sign changes split
  // a segment at its zero).
  auto scan_piece = [&](double t1, double A, double t2, double B) -> std::optional<WitnessPair> {
    if (violates(A)) return WitnessPair{argmax_t, t1};
    if (A > running_max) {
      running_max = A;
      argmax_t = t1;
    }
    const double lo = std::max(std::min(A, B), threshold);
    const double hi = std::min(std::max(A, B), running_max);
    if (lo < hi && A != B) {
      const double v = 0.5 * (lo + hi);
      const double t = t1 + (v - A) / (B - A) * (t2 - t1);
      if (t > t1 && t < t2) return WitnessPair{argmax_t, t};
    }
    return std::nullopt;
  };

  for (std::size_t k = 1; k < times.size(); ++k) {
    const double ta = times[k - 1];
    const double tb = times[k];
    const double ja = jumps[k - 1];
    const double jb = jumps[k];
    std::optional<WitnessPair> found;
    if ((ja < 0.0 && jb > 0.0) || (ja > 0.0 && jb < 0.0)) {
      const double tz = ta + (-ja) / (jb - ja) * (tb - ta);
      found = scan_piece(ta, std::abs(ja), tz, 0.0);
      if (!found) found = scan_piece(tz, 0.0, tb, std::abs(jb));
    } else {
      found = scan_piece(ta, std::abs(ja), tb, std::abs(jb));
    }
    if (found) return found;
  }
  if (violates(std::abs(jumps.back()))) return WitnessPair{argmax_t, times.back()};
  return std::nullopt;
}

double first_threshold_crossing(const BoundaryDatum& w, const MaterialParams& m) {
  const double threshold = m.elastic_jump_limit();
  const auto& times = w.times();
  const auto jumps = w.jumps();
  if (std::abs(jumps.front()) > threshold) return times.front();
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double jb = jumps[k];
    if (std::abs(jb) <= threshold) continue;
    const double ja = jumps[k - 1];
    const double target = std::copysign(threshold, jb);
    // |J(t_{k-1})| <= threshold < |J(t_k)|, so the crossing lies in the segment.
    return times[k - 1] + (target - ja) / (jb - ja) * (times[k] - times[k - 1]);
  }
  return times.back();
}

Classification cns_classify(const BoundaryDatum& w, const MaterialParams& m,
                            const LimitTrajectory& traj) {
  if (traj.states.size() < 2) {
    throw std::invalid_argument("cns_classify: trajectory needs at least two states");
  }
  Classification out;
  out.witness = find_cns_witness(w, m);
  out.verdict = out.witness ? Verdict::DamageOnly : Verdict::PerfectPlasticity;
  out.t0 = traj.t0;
  out.t0_star = first_threshold_crossing(w, m);

  double max_step = 0.0;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    max_step = std::max(max_step, traj.states[k].t - traj.states[k - 1].t);
  }
  if (std::abs(out.t0 - out.t0_star) > max_step * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "onset of damage t0 = " << out.t0 << " differs from the threshold crossing t0* = "
        << out.t0_star << " by more than one time step (" << max_step << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

Classification cns_classify(const BoundaryDatum& w, const MaterialParams& m, std::size_t steps) {
  const auto grid = uniform_time_grid(w, steps);
  return cns_classify(w, m, run_limit(m, w, grid));
}

ConsistencyReport classifier_consistency(const LimitTrajectory& traj, const MaterialParams& m,
                                         Verdict verdict, double residual_tol) {
  constexpr double kSaturationTol = 1e-9;
  ConsistencyReport report;
  const double s_star = m.yield_stress();

  std::optional<double> first_unsaturated;
  for (const auto& s : traj.states) {
    if (s.t <= traj.t0) continue;
    if (std::abs(std::abs(s.sigma) - s_star) > kSaturationTol) {
      first_unsaturated = s.t;
      break;
    }
  }
  report.by_saturation =
      first_unsaturated ? Verdict::DamageOnly : Verdict::PerfectPlasticity;

  const auto residuals = energy_balance_residuals(traj, m);
  std::optional<double> first_positive;
  std::optional<double> first_closed_form_mismatch;
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    report.max_residual = std::max(report.max_residual, residuals[k]);
    if (!first_positive && residuals[k] > residual_tol) first_positive = traj.states[k].t;
    const double route_gap =
        std::abs(traj.states[k].energy - traj.energy_integrated[k]);
    const double err = std::abs(residuals[k] - residual_closed_form(traj, m, k));
    report.max_closed_form_error = std::max(report.max_closed_form_error, err);
    if (!first_closed_form_mismatch && err > 1e-9 + route_gap) {
      first_closed_form_mismatch = traj.states[k].t;
    }
  }
  report.by_residual = first_positive ? Verdict::DamageOnly : Verdict::PerfectPlasticity;

  std::ostringstream msg;
  if (report.by_saturation != verdict || report.by_residual != verdict) {
    report.consistent = false;
    if (verdict == Verdict::PerfectPlasticity) {
      report.first_inconsistent_t =
          std::min(first_unsaturated.value_or(traj.states.back().t),
                   first_positive.value_or(traj.states.back().t));
    } else {
      report.first_inconsistent_t = traj.states.back().t;
    }
    msg << "datum verdict " << to_string(verdict) << ", saturation test "
        << to_string(report.by_saturation) << ", energy-balance test "
        << to_string(report.by_residual);
  }
  if (first_closed_form_mismatch) {
    report.consistent = false;
    if (!report.first_inconsistent_t || *first_closed_form_mismatch < *report.first_inconsistent_t) {
      report.first_inconsistent_t = first_closed_form_mismatch;
    }
    if (msg.tellp() > 0) msg << "; ";
    msg << "energy-balance residual departs from its closed form at t = "
        << *first_closed_form_mismatch;
  }
  report.message = msg.str();
  return report;
}

double DiscreteDisplacement::right_trace(double length) const {
  const double dx = length / static_cast<double>(slopes.size());
  double u = u_left;
  for (double s : slopes) u += s * dx;
  for (const auto& j : jumps) u += j.amplitude;
  return u;
}

double static_gamma_energy(const DiscreteDisplacement& u, const MaterialParams& m, double w0,
                           double wL) {
  if (u.slopes.empty()) {
    throw std::invalid_argument("static_gamma_energy: displacement has no cells");
  }
  const double dx = m.length / static_cast<double>(u.slopes.size());
  double bulk = 0.0;
  for (double s : u.slopes) bulk += wbar_1d(m, s) * dx;
  double jump_cost = 0.0;
  for (const auto& j : u.jumps) {
    if (!(j.x > 0.0 && j.x < m.length)) {
      throw std::invalid_argument("static_gamma_energy: interior jump outside (0, L)");
    }
    jump_cost += support_1d(m, j.amplitude);
  }
  const double boundary =
      support_1d(m, wL - u.right_trace(m.length)) + support_1d(m, w0 - u.u_left);
  return bulk + jump_cost + boundary;
}

std::vector<DiscreteDisplacement> random_competitors(const MaterialParams& m, double w0,
                                                     double wL, std::size_t count,
                                                     std::size_t cells, std::uint64_t seed) {
  if (cells == 0) {
    throw std::invalid_argument("random_competitors: need at least one cell");
  }
  const double J = wL - w0;
  const double L = m.length;
  const double elastic_slope =
      std::copysign(std::min(std::abs(J) / L, m.yield_stress() / m.a1), J);

  std::vector<DiscreteDisplacement> out;
  out.reserve(count);

  DiscreteDisplacement affine;
  affine.u_left = w0;
  affine.slopes.assign(cells, J / L);
  out.push_back(affine);

  DiscreteDisplacement saturated;
  saturated.u_left = w0;
  saturated.slopes.assign(cells, elastic_slope);
  const double rest = J - elastic_slope * L;
  if (rest != 0.0) saturated.jumps.push_back({0.5 * L, rest});
  out.push_back(saturated);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> centered(-1.0, 1.0);
  const double scale = std::abs(J) / L + m.yield_stress() / m.a1;

  while (out.size() < count) {
    DiscreteDisplacement u;
    const int family = static_cast<int>(out.size() % 3);
    if (family == 0) {
      // Near the saturated profile: perturbed slopes, one jump closing the trace.
      u.u_left = w0;
      u.slopes.resize(cells);
      for (auto& s : u.slopes) s = elastic_slope + 0.05 * scale * centered(rng);
      const double closing = wL - u.right_trace(L);
      u.jumps.push_back({L * (0.01 + 0.98 * unit(rng)), closing});
    } else if (family == 1) {
      // Uniform random slope, random jumps and trace mismatches.
      u.u_left = w0 + 0.2 * scale * L * centered(rng);
      u.slopes.assign(cells, 2.0 * scale * centered(rng));
      const int n_jumps = static_cast<int>(unit(rng) * 3.0);
      for (int j = 0; j < n_jumps; ++j) {
        u.jumps.push_back({L * (0.01 + 0.98 * unit(rng)), scale * L * centered(rng)});
      }
    } else {
      // Cellwise random slopes whose integral is drawn around J.
      u.u_left = w0;
      u.slopes.resize(cells);
      for (auto& s : u.slopes) s = J / L + scale * centered(rng);
      if (unit(rng) < 0.5) {
        u.jumps.push_back({L * (0.01 + 0.98 * unit(rng)), wL - u.right_trace(L)});
      }
    }
    out.push_back(std::move(u));
  }
  out.resize(count);
  return out;
}

StaticGammaReport static_gamma_check(const MaterialParams& m, double w0, double wL,
                                     std::size_t count, std::size_t cells, std::uint64_t seed) {
  StaticGammaReport report;
  report.initial_energy = initial_limit_state(m, wL - w0).energy;
  report.min_energy = std::numeric_limits<double>::infinity();
  for (const auto& u : random_competitors(m, w0, wL, count, cells, seed)) {
    report.min_energy = std::min(report.min_energy, static_gamma_energy(u, m, w0, wL));
    ++report.competitors;
  }
  return report;
}

}  // namespace damagelab
