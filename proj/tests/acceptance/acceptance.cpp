// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "damagelab/diagnostics.hpp"
#include "damagelab/envelope.hpp"
#include "damagelab/eps_evolution.hpp"
#include "damagelab/limit_evolution.hpp"
#include "damagelab/scenarios.hpp"
#include "eps_oracle.hpp"
#include "oracles.hpp"

using namespace damagelab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

Outcome trajectory_reproduction() {
  Outcome o;
  const auto cfg = preset("loading-unloading");
  const auto grid = uniform_time_grid(cfg.datum, 400);
  const auto traj = run_limit(cfg.material, cfg.datum, grid);
  double err_sigma = 0.0, err_l = 0.0;
  for (const auto& s : traj.states) {
    const double t = s.t;
    const double sigma = t <= 0.5 ? 2.0 * t : (t <= 1.0 ? 1.0 : 2.0 - t);
    const double l = t <= 0.5 ? 0.0 : (t <= 1.0 ? t - 0.5 : 0.5);
    err_sigma = std::max(err_sigma, std::abs(s.sigma - sigma));
    err_l = std::max(err_l, std::abs(s.damage_mass - l));
  }
  const auto cls = cns_classify(cfg.datum, cfg.material, traj);
  const double step = grid[1] - grid[0];
  o.detail << "max|sigma-exact|=" << err_sigma << " max|l-exact|=" << err_l << " t0=" << cls.t0
           << " t0*=" << cls.t0_star;
  o.require(err_sigma <= 1e-10, "sigma error > 1e-10");
  o.require(err_l <= 1e-10, "l error > 1e-10");
  o.require(std::abs(cls.t0 - 0.5) <= step && std::abs(cls.t0_star - 0.5) <= step &&
                std::abs(cls.t0 - cls.t0_star) <= step,
            "t0, t0* not within one step of 0.5");
  return o;
}

Outcome classifier() {
  Outcome o;
  auto run = [](const std::string& name) {
    const auto cfg = preset(name);
    const auto traj = run_limit(cfg.material, cfg.datum, uniform_time_grid(cfg.datum, 400));
    return std::make_pair(cns_classify(cfg.datum, cfg.material, traj),
                          energy_balance_residuals(traj, cfg.material));
  };
  const auto [mono, mono_r] = run("monotone");
  o.detail << "monotone: " << to_string(mono.verdict) << " maxR=" << max_abs(mono_r);
  o.require(mono.verdict == Verdict::PerfectPlasticity, "monotone not PerfectPlasticity");
  o.require(max_abs(mono_r) <= 1e-6, "monotone residual > 1e-6");

  for (const char* name : {"loading-unloading", "high-unload"}) {
    const auto [c, r] = run(name);
    o.detail << "; " << name << ": " << to_string(c.verdict);
    if (c.witness) o.detail << " witness=(" << c.witness->s << "," << c.witness->t << ")";
    o.detail << " maxR=" << max_of(r);
    o.require(c.verdict == Verdict::DamageOnly && c.witness.has_value(),
              std::string(name) + " not DamageOnly with witness");
    o.require(max_of(r) > 0.0, std::string(name) + " residual not positive");
    if (std::string(name) == "loading-unloading") {
      const double expected = MaterialParams{}.yield_stress() * 0.5;
      o.detail << " R(T)=" << r.back() << " (stated " << expected << ")";
      o.require(std::abs(r.back() - expected) <= 1e-6, "R(T) differs from s*0.5 by > 1e-6");
    }
  }
  return o;
}

Outcome envelope_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.01 + 2.0 * u(rng);
    const double b = a * (1.05 + 30.0 * u(rng));
    const double K = 0.05 + 10.0 * u(rng);
    const TwoWellParams p(a, b, K);
    const double span = 1.5 * envelope_slope_bounds(p).xi2;
    for (int i = 0; i < 10000; ++i) {
      const double xi = -span + 2.0 * span * i / 9999.0;
      worst = std::max(worst, std::abs(convex_envelope(p, xi) -
                                       oracle::envelope_by_minimization(a, b, K, xi)));
    }
  }
  const TwoWellParams fig(0.1, 1.0, 2.0);
  const auto k = envelope_slope_bounds(fig);
  // Half a unit in the fourth significant digit of the reference.
  auto four = [](double x, double ref) {
    return std::abs(x - ref) <= 0.5 * std::pow(10.0, std::floor(std::log10(std::abs(ref))) - 3.0);
  };
  const double y1 = convex_envelope(fig, k.xi1);
  const double y2 = convex_envelope(fig, k.xi2);
  o.detail << "max|envelope-oracle|=" << worst << " kinks=(" << k.xi1 << "," << y1 << "),("
           << k.xi2 << "," << y2 << ")";
  o.require(worst <= 1e-10, "oracle disagreement > 1e-10");
  o.require(four(k.xi1, 0.4714) && four(y1, 0.2222) && four(k.xi2, 4.714) && four(y2, 4.222),
            "kinks differ from (0.4714, 0.2222), (4.714, 4.222) at 4 significant digits");
  return o;
}

Outcome eps_consistency() {
  Outcome o;
  auto cfg = preset("loading-unloading");
  cfg.steps = 400;
  cfg.cells = 64;
  cfg.eps_list = {0.1, 0.05, 0.02, 0.01};
  const auto start = std::chrono::steady_clock::now();
  const auto report = sweep_eps(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << "sup|sigma_eps-sigma|:";
  for (const auto& r : report.rows) o.detail << " " << r.sup_sigma;
  o.detail << "; sup|l_eps-l|:";
  for (const auto& r : report.rows) o.detail << " " << r.sup_damage;
  o.detail << "; " << seconds << " s";
  bool strictly_sigma = true, strictly_l = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    strictly_sigma = strictly_sigma && report.rows[i].sup_sigma < report.rows[i - 1].sup_sigma;
    strictly_l = strictly_l && report.rows[i].sup_damage < report.rows[i - 1].sup_damage;
  }
  o.require(strictly_sigma, "sigma deviation not decreasing");
  o.require(strictly_l, "l deviation not decreasing");
  o.require(report.rows.back().sup_sigma <= 0.02, "sigma deviation at eps=0.01 > 0.02");
  o.require(report.rows.back().sup_damage <= 0.02, "l deviation at eps=0.01 > 0.02");
  o.require(seconds <= 60.0, "sweep slower than 60 s");
  return o;
}

Outcome structural_invariants() {
  Outcome o;
  std::size_t eps_steps = 0, limit_steps = 0;
  double worst_feb_ratio = 0.0, min_residual = 0.0, worst_compliance = 0.0, worst_recon = 0.0;
  for (const auto& info : preset_catalog()) {
    const auto cfg = preset(info.name);
    const auto& m = cfg.material;
    const auto grid = uniform_time_grid(cfg.datum, 400);
    for (double eps : cfg.eps_list) {
      // run_eps throws on any violation of the stiffness identity, Theta/a
      // monotonicity or the stress bounds; re-check here independently.
      const auto traj = run_eps(m, eps, 16, cfg.datum, grid);
      const double plateau = m.yield_stress() * m.plateau_factor(eps);
      for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const auto& st = traj.records[k].state;
        if (auto bad = check_state(st, m)) o.require(false, info.name + ": " + *bad);
        if (k > 0) {
          if (auto bad = check_monotone(traj.records[k - 1].state, st)) {
            o.require(false, info.name + ": " + *bad);
          }
        }
        o.require(std::abs(st.sigma) <= plateau + 1e-12, info.name + ": eps stress bound");
        ++eps_steps;
      }
    }

    const auto traj = run_limit(m, cfg.datum, grid);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& s = traj.states[k];
      o.require(std::abs(s.sigma) <= m.yield_stress(), info.name + ": |sigma| > s*");
      const double c = std::abs(s.jump - s.sigma * (s.damage_mass / m.a0 + m.length / m.a1));
      worst_compliance = std::max(worst_compliance, c);
      o.require(energy_discriminant(s.energy, s.jump, m) >= 0.0, info.name + ": Delta < 0");
      worst_recon = std::max(worst_recon,
                             std::abs(damage_mass_from_energy(s.energy, s.jump, m) - s.damage_mass));
      if (k > 0) {
        const auto& p = traj.states[k - 1];
        o.require(s.damage_mass >= p.damage_mass, info.name + ": l decreased");
        if (s.damage_mass > p.damage_mass) {
          o.require(std::abs(s.sigma) == m.yield_stress(), info.name + ": growth below yield");
        }
      }
      ++limit_steps;
    }
    const auto residuals = energy_balance_residuals(traj, m);
    min_residual = std::min(min_residual, *std::min_element(residuals.begin(), residuals.end()));

    const double feb_coarse = max_abs(
        fake_energy_balance_residuals(run_limit(m, cfg.datum, uniform_time_grid(cfg.datum, 200)), m));
    const double feb_fine = max_abs(fake_energy_balance_residuals(traj, m));
    o.require(feb_fine <= 0.5 * feb_coarse + 1e-12, info.name + ": fake balance did not halve");
    worst_feb_ratio = std::max(worst_feb_ratio, feb_fine);
  }
  o.require(worst_compliance <= 1e-12, "compliance relation off by > 1e-12");
  o.require(worst_recon <= 1e-9, "l reconstruction off by > 1e-9");
  o.require(min_residual >= -1e-9, "R(t) < -1e-9");
  o.detail << eps_steps << " eps-model states, " << limit_steps
           << " limit states; compliance err=" << worst_compliance
           << " reconstruction err=" << worst_recon << " min R=" << min_residual
           << " max fake-balance residual=" << worst_feb_ratio;
  return o;
}

Outcome static_gamma() {
  Outcome o;
  const MaterialParams m;
  double worst_route = 0.0;
  std::size_t competitors = 0;
  double smallest_margin = INFINITY;
  for (double J0 : {0.0, 0.4, 1.0, -1.5}) {
    const auto s = initial_limit_state(m, J0);
    const double closed = 0.5 * J0 * s.sigma + m.kappa * s.damage_mass;
    worst_route = std::max(worst_route, std::abs(s.energy - closed));
    worst_route = std::max(worst_route, std::abs(s.energy - elastic_plus_plastic_energy(s, m)));
    const auto report = static_gamma_check(m, 0.0, J0, 2000, 32, 1234);
    competitors += report.competitors;
    smallest_margin = std::min(smallest_margin, report.min_energy - report.initial_energy);
  }
  o.detail << "energy-route err=" << worst_route << " competitors=" << competitors
           << " min(F - E0)=" << smallest_margin;
  o.require(worst_route <= 1e-12, "energy routes disagree by > 1e-12");
  o.require(smallest_margin >= -1e-12, "a competitor beats E(0)");
  return o;
}

Outcome one_sided_minimality() {
  Outcome o;
  const MaterialParams m;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const double eps = 0.01 + 0.4 * u(rng);
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const auto prev = eps_oracle::random_state(m, eps, n, rng);
    const double jump = 4.0 * (u(rng) - 0.5) * (1.0 + 1.0 / eps) * m.length / n;
    const auto next = incremental_step(prev, m, jump);
    const double attained = eps_oracle::step_energy(prev, next, m);
    const double best = eps_oracle::grid_minimum(prev, m, jump, 11);
    worst = std::max(worst, attained - best);
  }
  o.detail << "max(attained - best grid competitor)=" << worst << " over 100 steps";
  o.require(worst <= 1e-9, "a grid competitor beats the step by > 1e-9");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "loading-unloading trajectory reproduction", trajectory_reproduction},
      {2, "plasticity/damage classifier", classifier},
      {3, "convex envelope vs minimization oracle", envelope_oracle},
      {4, "eps-consistency sweep", eps_consistency},
      {5, "structural invariant suite", structural_invariants},
      {6, "static limit-functional consistency", static_gamma},
      {7, "one-sided minimality oracle", one_sided_minimality},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
