#pragma once

#include <cmath>

#include "pdc/errors.hpp"

namespace pdc {

enum class GridKind { internal_angle_rad, angular_frequency_rads };

// Uniform sampling axis for one party of a joint amplitude.
struct Grid1D {
  GridKind kind = GridKind::internal_angle_rad;
  double start = 0.0;
  double step = 0.0;
  int count = 0;

  double value(int i) const { return start + step * i; }
  double stop() const { return value(count - 1); }

  void validate() const {
    if (!(count >= 16)) throw domain_error("grid needs at least 16 samples");
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
      throw domain_error("grid step must be positive and finite");
  }

  static Grid1D linspace(GridKind kind, double lo, double hi, int count) {
    if (!(count >= 16)) throw domain_error("grid needs at least 16 samples");
    if (!(hi > lo)) throw domain_error("grid range must be increasing");
    Grid1D g{kind, lo, (hi - lo) / (count - 1), count};
    g.validate();
    return g;
  }
};

}  // namespace pdc
