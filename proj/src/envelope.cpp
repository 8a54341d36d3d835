#include "damagelab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace damagelab {

TwoWellParams::TwoWellParams(double a_weak, double b_strong, double offset)
    : a(a_weak), b(b_strong), K(offset) {
  if (!(a > 0.0) || !(a < b) || !(K > 0.0) || !std::isfinite(b) || !std::isfinite(K)) {
    throw std::invalid_argument("two-well parameters require 0 < a < b and K > 0");
  }
}

double raw_energy(const TwoWellParams& p, double xi) {
  const double xi2 = xi * xi;
  return std::min(p.K + p.a * xi2, p.b * xi2);
}

EnvelopeKinks envelope_slope_bounds(const TwoWellParams& p) {
  const double gap = p.b - p.a;
  const double xi1 = std::sqrt(p.a * p.K / (p.b * gap));
  return {xi1, (p.b / p.a) * xi1, std::sqrt(4.0 * p.a * p.b * p.K / gap)};
}

double convex_envelope(const TwoWellParams& p, double xi) {
  const auto kinks = envelope_slope_bounds(p);
  const double r = std::abs(xi);
  if (r <= kinks.xi1) {
    return p.b * xi * xi;
  }
  if (r < kinks.xi2) {
    return r * kinks.plateau_slope - p.a * p.K / (p.b - p.a);
  }
  return p.K + p.a * xi * xi;
}

double envelope_derivative(const TwoWellParams& p, double xi) {
  const auto kinks = envelope_slope_bounds(p);
  const double r = std::abs(xi);
  if (r <= kinks.xi1) {
    return 2.0 * p.b * xi;
  }
  if (r < kinks.xi2) {
    return std::copysign(kinks.plateau_slope, xi);
  }
  return 2.0 * p.a * xi;
}

double optimal_theta(const TwoWellParams& p, double xi) {
  const auto kinks = envelope_slope_bounds(p);
  const double r = std::abs(xi);
  if (r <= kinks.xi1) {
    return 0.0;
  }
  if (r >= kinks.xi2) {
    return 1.0;
  }
  // Mixture half-stiffness that puts the laminate stress on the plateau.
  const double mix = std::sqrt(p.a * p.b * p.K / (p.b - p.a)) / r;
  const double theta = (1.0 / mix - 1.0 / p.b) / (1.0 / p.a - 1.0 / p.b);
  return std::clamp(theta, 0.0, 1.0);
}

double gclosure_1d(double theta, double a_weak, double a_strong) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("gclosure_1d: volume fraction must lie in [0,1]");
  }
  if (!(a_weak > 0.0) || !(a_weak <= a_strong)) {
    throw std::invalid_argument("gclosure_1d: requires 0 < a_weak <= a_strong");
  }
  if (theta == 0.0) return a_strong;
  if (theta == 1.0) return a_weak;
  return a_weak * a_strong / (theta * a_strong + (1.0 - theta) * a_weak);
}

TwoWellParams eps_cell_wells(const MaterialParams& m, double eps, double sound,
                             double stiffness) {
  return TwoWellParams(0.5 * eps * m.a0, 0.5 * stiffness, m.kappa * sound / eps);
}

double wbar_1d(const MaterialParams& m, double xi) {
  const double s = m.yield_stress();
  const double r = std::abs(xi);
  if (r <= s / m.a1) {
    return 0.5 * m.a1 * xi * xi;
  }
  return s * r - s * s / (2.0 * m.a1);
}

double g_constraint(std::span<const double> tau_sorted, double lambda0, double mu0) {
  if (tau_sorted.empty()) {
    throw std::invalid_argument("g_constraint: no eigenvalues given");
  }
  if (!std::is_sorted(tau_sorted.begin(), tau_sorted.end())) {
    throw std::invalid_argument("g_constraint: eigenvalues must be sorted ascending");
  }
  if (!(lambda0 > 0.0) || !(mu0 > 0.0)) {
    throw std::invalid_argument("g_constraint: Lame moduli must be positive");
  }
  const double lo = tau_sorted.front();
  const double hi = tau_sorted.back();
  const double p_wave = lambda0 + 2.0 * mu0;
  const double selector = p_wave / (2.0 * (lambda0 + mu0)) * (lo + hi);
  if (selector < lo) {
    return lo * lo / p_wave;
  }
  if (selector <= hi) {
    const double diff = lo - hi;
    const double sum = lo + hi;
    return diff * diff / (4.0 * mu0) + sum * sum / (4.0 * (lambda0 + mu0));
  }
  return hi * hi / p_wave;
}

bool in_yield_set(const MaterialParams& m, double sigma) {
  return std::abs(sigma) <= m.yield_stress();
}

double support_1d(const MaterialParams& m, double q) { return m.yield_stress() * std::abs(q); }

}  // namespace damagelab
