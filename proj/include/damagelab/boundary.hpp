#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace damagelab {

/// Time samples of the Dirichlet traces w(t)(0) and w(t)(L), interpolated
/// piecewise-linearly in time. The prescribed displacement inside the bar is
/// the affine interpolant of the two traces.
class BoundaryDatum {
 public:
  /// Throws ConfigError unless the three vectors have equal length >= 2,
  /// times start at 0, are strictly increasing and all values are finite.
  BoundaryDatum(std::vector<double> times, std::vector<double> w0, std::vector<double> wL);

  [[nodiscard]] double horizon() const { return times_.back(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<double>& left() const { return w0_; }
  [[nodiscard]] const std::vector<double>& right() const { return wL_; }

  [[nodiscard]] double left_at(double t) const;
  [[nodiscard]] double right_at(double t) const;

  /// J(t) = w(t)(L) - w(t)(0).
  [[nodiscard]] double jump_at(double t) const;

  /// Jump at every sample instant.
  [[nodiscard]] std::vector<double> jumps() const;

  bool operator==(const BoundaryDatum&) const = default;

 private:
  [[nodiscard]] double interpolate(const std::vector<double>& values, double t) const;

  std::vector<double> times_;
  std::vector<double> w0_;
  std::vector<double> wL_;
};

/// Uniform grid t_k = T k / steps merged with the datum's own sample instants.
[[nodiscard]] std::vector<double> uniform_time_grid(const BoundaryDatum& w, std::size_t steps);

/// Throws ConfigError unless `grid` is strictly increasing, spans [0, T] and
/// contains every sample instant of `w`.
void require_refines(std::span<const double> grid, const BoundaryDatum& w);

}  // namespace damagelab
