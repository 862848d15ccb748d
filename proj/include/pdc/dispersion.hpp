#pragma once

#include <cmath>

#include "pdc/constants.hpp"
#include "pdc/errors.hpp"
#include "pdc/sellmeier.hpp"

namespace pdc {

enum class Polarization { ordinary, extraordinary };

enum class AngleFrame { internal, external };

// Plane angle tagged with the frame it is measured in, to keep internal
// (in-crystal) and external (in-air) angles from being mixed up.
struct Angle {
  double rad = 0.0;
  AngleFrame frame = AngleFrame::internal;
};

inline double index_o(const CrystalSpec& c, double lambda_um) {
  c.require_in_window(lambda_um);
  return c.ordinary.n(lambda_um);
}

// Extraordinary-wave index for a wavevector at polar angle theta from the
// optic axis: 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
// The expression is even in theta, so signed angles are accepted.
inline double index_e(const CrystalSpec& c, double lambda_um, double theta_rad) {
  c.require_in_window(lambda_um);
  const double no2 = c.ordinary.n2(lambda_um);
  const double ne2 = c.extraordinary.n2(lambda_um);
  const double s = std::sin(theta_rad);
  const double co = std::cos(theta_rad);
  return 1.0 / std::sqrt(co * co / no2 + s * s / ne2);
}

inline double index(const CrystalSpec& c, Polarization pol, double lambda_um,
                    double theta_rad) {
  return pol == Polarization::ordinary ? index_o(c, lambda_um)
                                       : index_e(c, lambda_um, theta_rad);
}

// d n_e(l, theta) / dl at fixed theta, via the principal-set derivatives.
inline double dindex_e_dlambda(const CrystalSpec& c, double lambda_um,
                               double theta_rad) {
  const double s = std::sin(theta_rad);
  const double co = std::cos(theta_rad);
  const double no2 = c.ordinary.n2(lambda_um);
  const double ne2 = c.extraordinary.n2(lambda_um);
  // d(1/n^2)/dl = cos^2 d(n_o^-2)/dl + sin^2 d(n_e^-2)/dl
  const double dinv = -co * co * c.ordinary.dn2_dlambda(lambda_um) / (no2 * no2) -
                      s * s * c.extraordinary.dn2_dlambda(lambda_um) / (ne2 * ne2);
  const double n = index_e(c, lambda_um, theta_rad);
  return -0.5 * n * n * n * dinv;
}

// Group index n_g = n - lambda dn/dlambda (analytic Sellmeier derivative).
inline double group_index(const CrystalSpec& c, Polarization pol,
                          double lambda_um, double theta_rad = 0.0) {
  c.require_in_window(lambda_um);
  if (pol == Polarization::ordinary)
    return c.ordinary.n(lambda_um) - lambda_um * c.ordinary.dn_dlambda(lambda_um);
  return index_e(c, lambda_um, theta_rad) -
         lambda_um * dindex_e_dlambda(c, lambda_um, theta_rad);
}

// Poynting-vector walk-off of an extraordinary wave at polar angle theta:
//   tan(rho) = (n_e(theta)^2 / 2) sin(2 theta) (1/n_e^2 - 1/n_o^2).
// Positive for a negative uniaxial crystal; the energy flow tilts away from
// the optic axis by rho.
inline double walkoff_angle(const CrystalSpec& c, double lambda_um,
                            double theta_rad) {
  const double n = index_e(c, lambda_um, theta_rad);
  const double tan_rho = 0.5 * n * n * std::sin(2.0 * theta_rad) *
                         (1.0 / c.extraordinary.n2(lambda_um) -
                          1.0 / c.ordinary.n2(lambda_um));
  return std::atan(tan_rho);
}

// Refraction of an internal propagation angle through a plane exit face
// normal to the pump axis: sin(theta_ext) = n sin(theta_int).
inline double snell_external(double internal_rad, double n) {
  const double s = n * std::sin(internal_rad);
  if (std::abs(s) > 1.0)
    throw geometry_error("internal angle beyond the critical angle");
  return std::asin(s);
}

inline double snell_internal(double external_rad, double n) {
  return std::asin(std::sin(external_rad) / n);
}

// Angle seen by a detector at transverse offset x in the focal plane of a
// lens of focal length f.
inline Angle detector_angle(double x_m, double focal_length_m) {
  if (!(focal_length_m > 0.0)) throw domain_error("focal length must be positive");
  return Angle{std::atan2(x_m, focal_length_m), AngleFrame::external};
}

}  // namespace pdc
