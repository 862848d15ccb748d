#pragma once

#include <numbers>

namespace pdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// vacuum wavelength in micrometers <-> angular frequency in rad/s
constexpr double omega_from_um(double lambda_um) {
  return kTwoPi * kSpeedOfLight / (lambda_um * 1e-6);
}
constexpr double um_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega * 1e6;
}

// wavevector magnitude in 1/m for a wave of index n
constexpr double wavenumber(double n, double lambda_um) {
  return kTwoPi * n / (lambda_um * 1e-6);
}

}  // namespace pdc
