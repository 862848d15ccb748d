#pragma once

#include <stdexcept>
#include <string>

namespace pdc {

// Input outside the physically meaningful domain (wavelength outside the
// transparency window, negative gain, malformed grids, ...).
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested process has no solution for this geometry (no phase-matching
// root in range, transverse momentum not satisfiable, ...).
struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver failed to converge or a computation degenerated.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration input.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pdc
