#include "damagelab/material.hpp"

#include <cmath>

namespace damagelab {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("material parameter '") + name +
                      "' must be finite and strictly positive");
  }
}

}  // namespace

void MaterialParams::validate() const {
  require_positive(kappa, "kappa");
  require_positive(a0, "a0");
  require_positive(a1, "a1");
  require_positive(length, "L");
  require_positive(horizon, "T");
  if (!(a0 < a1)) {
    throw ConfigError("material parameters require a0 < a1");
  }
}

double MaterialParams::yield_stress() const { return std::sqrt(2.0 * kappa * a0); }

double MaterialParams::elastic_jump_limit() const { return yield_stress() * length / a1; }

double MaterialParams::plateau_factor(double eps) const {
  if (!(eps > 0.0) || !(eps * a0 < a1)) {
    throw ConfigError("epsilon must satisfy 0 < eps*a0 < a1");
  }
  return std::sqrt(a1 / (a1 - eps * a0));
}

}  // namespace damagelab
