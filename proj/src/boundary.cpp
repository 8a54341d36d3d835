#include "damagelab/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "damagelab/material.hpp"

namespace damagelab {

namespace {

// Instants closer than this (relative to the horizon) are the same instant.
constexpr double kTimeMatchTolerance = 1e-12;

}  // namespace

BoundaryDatum::BoundaryDatum(std::vector<double> times, std::vector<double> w0,
                             std::vector<double> wL)
    : times_(std::move(times)), w0_(std::move(w0)), wL_(std::move(wL)) {
  if (times_.size() < 2 || w0_.size() != times_.size() || wL_.size() != times_.size()) {
    throw ConfigError("boundary datum needs at least two samples and matching trace lengths");
  }
  if (times_.front() != 0.0) {
    throw ConfigError("boundary datum must start at t = 0");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(w0_[i]) || !std::isfinite(wL_[i])) {
      throw ConfigError("boundary datum contains a non-finite value");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw ConfigError("boundary datum sample times must be strictly increasing");
    }
  }
}

double BoundaryDatum::interpolate(const std::vector<double>& values, double t) const {
  if (t <= times_.front()) return values.front();
  if (t >= times_.back()) return values.back();
  const auto upper = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(upper - times_.begin());
  const double t0 = times_[k - 1];
  const double t1 = times_[k];
  const double s = (t - t0) / (t1 - t0);
  return values[k - 1] + s * (values[k] - values[k - 1]);
}

double BoundaryDatum::left_at(double t) const { return interpolate(w0_, t); }

double BoundaryDatum::right_at(double t) const { return interpolate(wL_, t); }

double BoundaryDatum::jump_at(double t) const { return right_at(t) - left_at(t); }

std::vector<double> BoundaryDatum::jumps() const {
  std::vector<double> out(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) out[i] = wL_[i] - w0_[i];
  return out;
}

std::vector<double> uniform_time_grid(const BoundaryDatum& w, std::size_t steps) {
  if (steps == 0) {
    throw ConfigError("time grid needs at least one step");
  }
  const double horizon = w.horizon();
  const double tol = kTimeMatchTolerance * horizon;
  std::vector<double> grid;
  grid.reserve(steps + w.times().size() + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    grid.push_back(horizon * static_cast<double>(k) / static_cast<double>(steps));
  }
  grid.back() = horizon;
  for (double t : w.times()) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), t - tol);
    if (it != grid.end() && std::abs(*it - t) <= tol) {
      *it = t;  // snap so the knot is represented exactly
    } else {
      grid.insert(it, t);
    }
  }
  return grid;
}

void require_refines(std::span<const double> grid, const BoundaryDatum& w) {
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw ConfigError("time grid must start at 0 and contain at least two instants");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ConfigError("time grid must be strictly increasing");
    }
  }
  const double tol = kTimeMatchTolerance * w.horizon();
  if (std::abs(grid.back() - w.horizon()) > tol) {
    throw ConfigError("time grid must end at the datum horizon");
  }
  for (double t : w.times()) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), t - tol);
    if (it == grid.end() || std::abs(*it - t) > tol) {
      throw ConfigError("time grid does not contain every boundary datum sample instant");
    }
  }
}

}  // namespace damagelab
