#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the closed forms under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace oracle {

/// Energy of a two-phase laminate at weak fraction theta and mean strain xi:
/// K theta + (theta/a + (1-theta)/b)^{-1} xi^2.
inline double laminate_energy(double a, double b, double K, double theta, double xi) {
  return K * theta + xi * xi / (theta / a + (1.0 - theta) / b);
}

/// Convex envelope of min(K + a xi^2, b xi^2) as the minimum over the laminate
/// volume fraction, found by Brent's method plus both endpoints.
inline double envelope_by_minimization(double a, double b, double K, double xi) {
  auto g = [&](double theta) { return laminate_energy(a, b, K, theta, xi); };
  const auto [arg, val] = boost::math::tools::brent_find_minima(g, 0.0, 1.0, 52);
  (void)arg;
  return std::min({g(0.0), g(1.0), val});
}

/// Minimizing theta from the same search.
inline double theta_by_minimization(double a, double b, double K, double xi) {
  auto g = [&](double theta) { return laminate_energy(a, b, K, theta, xi); };
  const auto [arg, val] = boost::math::tools::brent_find_minima(g, 0.0, 1.0, 52);
  if (g(0.0) <= val && g(0.0) <= g(1.0)) return 0.0;
  if (g(1.0) <= val) return 1.0;
  return arg;
}

/// Kink strains located numerically: the first and last xi on a fine grid
/// where the minimization oracle departs from the pure wells.
struct Kinks {
  double xi1;
  double xi2;
};

inline Kinks kinks_by_bisection(double a, double b, double K) {
  // Below xi1 the strong well is optimal (theta = 0); above xi2 the weak one.
  auto theta_at = [&](double xi) { return theta_by_minimization(a, b, K, xi); };
  double hi = 1.0;
  while (theta_at(hi) < 1.0 - 1e-9) hi *= 2.0;
  auto bisect = [&](auto&& pred) {
    double lo = 0.0, up = hi;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + up);
      (pred(mid) ? up : lo) = mid;
    }
    return 0.5 * (lo + up);
  };
  const double xi1 = bisect([&](double xi) { return theta_at(xi) > 1e-9; });
  const double xi2 = bisect([&](double xi) { return theta_at(xi) >= 1.0 - 1e-9; });
  return {xi1, xi2};
}

/// Huber-type elastic-plastic density by direct minimization over eta:
/// inf_eta a1/2 (xi - eta)^2 + s |eta|.
inline double wbar_by_minimization(double a1, double s, double xi) {
  auto g = [&](double eta) { return 0.5 * a1 * (xi - eta) * (xi - eta) + s * std::abs(eta); };
  const double span = std::abs(xi) + 1.0;
  const auto [arg, val] = boost::math::tools::brent_find_minima(g, -span, span, 52);
  (void)arg;
  return std::min(val, g(0.0));
}

/// Energy of a series bar with per-cell effective half-stiffnesses `half`
/// carrying total strain integral `jump`: jump^2 / sum(dx / half_i).
inline double series_energy(const std::vector<double>& half, double dx, double jump) {
  double compliance = 0.0;
  for (double m : half) compliance += dx / m;
  return jump * jump / compliance;
}

/// Trapezoidal integral of sigma dJ for sampled (J, sigma) pairs.
inline double trapezoid_work(const std::vector<double>& jump, const std::vector<double>& sigma) {
  double w = 0.0;
  for (std::size_t k = 1; k < jump.size(); ++k) {
    w += 0.5 * (sigma[k] + sigma[k - 1]) * (jump[k] - jump[k - 1]);
  }
  return w;
}

/// Brute-force check of the boundary-datum criterion on a dense resampling:
/// is there s < t with |J(t)| < |J(s)| and |J(t)| > threshold?
template <typename JumpFn>
bool cns_violated_dense(JumpFn&& jump, double horizon, double threshold, std::size_t n) {
  double running_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= n; ++i) {
    const double v = std::abs(jump(horizon * static_cast<double>(i) / static_cast<double>(n)));
    if (v < running_max && v > threshold) return true;
    running_max = std::max(running_max, v);
  }
  return false;
}

}  // namespace oracle
