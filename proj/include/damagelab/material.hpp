#pragma once

#include <stdexcept>
#include <string>

namespace damagelab {

/// Invalid user input: material parameters, boundary data, configuration files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver could not produce a state satisfying its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bar of length `length` made of a sound phase (stiffness a1) that may be
/// damaged into a weak phase (stiffness eps*a0) at volumetric cost kappa/eps,
/// loaded over [0, horizon].
struct MaterialParams {
  double kappa = 0.5;
  double a0 = 1.0;
  double a1 = 2.0;
  double length = 1.0;
  double horizon = 2.0;

  /// Throws ConfigError unless every field is positive and a0 < a1.
  void validate() const;

  /// Radius of the yield interval K = [-s*, s*], s* = sqrt(2 kappa a0).
  [[nodiscard]] double yield_stress() const;

  /// Largest |jump| carried by the pristine bar without damage: s* L / a1.
  [[nodiscard]] double elastic_jump_limit() const;

  /// sqrt(a1 / (a1 - eps a0)): ratio between the plateau stress of the
  /// eps-model and s*.
  [[nodiscard]] double plateau_factor(double eps) const;

  bool operator==(const MaterialParams&) const = default;
};

}  // namespace damagelab
