#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pdc/constants.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/errors.hpp"
#include "pdc/rootfind.hpp"
#include "pdc/sellmeier.hpp"

namespace pdc {

// e -> o + o (type I) or e -> o + e (type II, the detected beam is the
// ordinary one).
enum class ProcessType { type1, type2 };

struct Segment {
  double length_m = 0.0;
  double gap_after_m = 0.0;  // vacuum gap between this crystal and the next
};

// Geometry frame: the pump wavevector defines z, emission angles are measured
// in the principal plane, and POSITIVE angle means away from the optic axis,
// i.e. the side the extraordinary pump's Poynting vector walks toward.  A ray
// at internal angle x therefore sees the optic axis at theta_c + x.
struct ProcessGeometry {
  CrystalSpec crystal;
  ProcessType type = ProcessType::type1;
  double pump_wavelength_um = 0.0;
  double cut_angle_rad = 0.0;  // optic axis to pump wavevector
  std::vector<Segment> segments;

  double total_length() const {
    double l = 0.0;
    for (const auto& s : segments) l += s.length_m;
    return l;
  }

  double degenerate_wavelength_um() const { return 2.0 * pump_wavelength_um; }

  void validate() const {
    crystal.validate();
    crystal.require_in_window(pump_wavelength_um);
    if (!(cut_angle_rad > 0.0 && cut_angle_rad < kPi / 2.0))
      throw domain_error("cut angle must lie in (0, pi/2)");
    if (segments.empty()) throw domain_error("geometry needs at least one segment");
    for (const auto& s : segments) {
      if (!(s.length_m > 0.0)) throw domain_error("segment length must be positive");
      if (!(s.gap_after_m >= 0.0)) throw domain_error("segment gap must be nonnegative");
    }
  }
};

inline double idler_wavelength_um(const ProcessGeometry& g, double signal_um) {
  const double inv = 1.0 / g.pump_wavelength_um - 1.0 / signal_um;
  if (!(inv > 0.0))
    throw domain_error("signal wavelength must exceed the pump wavelength");
  return 1.0 / inv;
}

struct MismatchResult {
  double delta_kz = 0.0;          // 1/m
  double idler_angle_rad = 0.0;   // internal, signed
  double idler_wavelength_um = 0.0;
};

namespace detail {

// Internal idler angle from exact transverse momentum conservation
// q_i = -q_s.  For type II the extraordinary idler index depends on its own
// direction, solved by fixed-point iteration.
inline double solve_idler_angle(const ProcessGeometry& g, double lambda_i_um,
                                double q_s, double* k_i_out) {
  if (g.type == ProcessType::type1) {
    const double k_i = wavenumber(index_o(g.crystal, lambda_i_um), lambda_i_um);
    const double s = -q_s / k_i;
    if (std::abs(s) > 1.0)
      throw geometry_error("transverse momentum not satisfiable by the idler");
    *k_i_out = k_i;
    return std::asin(s);
  }
  const auto k_at = [&](double x) {
    return wavenumber(index_e(g.crystal, lambda_i_um, g.cut_angle_rad + x),
                      lambda_i_um);
  };
  double angle = 0.0;
  for (int it = 0; it < 32; ++it) {
    const double k_i = k_at(angle);
    const double s = -q_s / k_i;
    if (std::abs(s) > 1.0) break;
    const double next = std::asin(s);
    if (std::abs(next - angle) < 1e-14) {
      *k_i_out = k_i;
      return next;
    }
    angle = next;
  }
  // The map asin(-q_s / k_i(x)) stops contracting near grazing emission;
  // fall back to bisecting q_i(x) + q_s = 0, which brackets any solution.
  const double eps = 1e-9;
  double lo = -kPi / 2 + eps;
  double hi = kPi / 2 - eps;
  const auto h = [&](double x) { return k_at(x) * std::sin(x) + q_s; };
  double h_lo = h(lo);
  double h_hi = h(hi);
  if (h_lo == 0.0) hi = lo;
  else if (h_hi == 0.0) lo = hi;
  else if (h_lo * h_hi > 0.0)
    throw geometry_error("transverse momentum not satisfiable by the idler");
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h_mid = h(mid);
    if (h_mid == 0.0) { lo = hi = mid; break; }
    if (h_lo * h_mid <= 0.0) { hi = mid; h_hi = h_mid; }
    else { lo = mid; h_lo = h_mid; }
  }
  angle = 0.5 * (lo + hi);
  *k_i_out = k_at(angle);
  return angle;
}

}  // namespace detail

// Longitudinal wavevector mismatch for a signal plane wave at the given
// internal angle, with the idler direction fixed by transverse momentum
// conservation and energy conservation:
//   dk_z = k_p - k_s cos(x_s) - k_i cos(x_i).
inline MismatchResult delta_k(const ProcessGeometry& g, double signal_um,
                              double signal_angle_rad) {
  const double lambda_i = idler_wavelength_um(g, signal_um);
  g.crystal.require_in_window(signal_um);
  g.crystal.require_in_window(lambda_i);
  const double k_p = wavenumber(
      index_e(g.crystal, g.pump_wavelength_um, g.cut_angle_rad),
      g.pump_wavelength_um);
  const double k_s = wavenumber(index_o(g.crystal, signal_um), signal_um);
  const double q_s = k_s * std::sin(signal_angle_rad);
  double k_i = 0.0;
  const double idler_angle = detail::solve_idler_angle(g, lambda_i, q_s, &k_i);
  MismatchResult r;
  r.idler_wavelength_um = lambda_i;
  r.idler_angle_rad = idler_angle;
  r.delta_kz = k_p - k_s * std::cos(signal_angle_rad) - k_i * std::cos(idler_angle);
  return r;
}

enum class Branch { upper, lower };

struct TuningPoint {
  double external_angle_rad = 0.0;
  double signal_wavelength_um = 0.0;
  double idler_wavelength_um = 0.0;
  double idler_external_angle_rad = 0.0;
  Branch branch = Branch::upper;
};

struct TuningCurve {
  std::vector<TuningPoint> points;
};

// All wavelength roots of dk_z = 0 for each sampled external signal angle.
// Root tolerance: |dk_z| * total crystal length < 1e-3.
inline TuningCurve tuning_curve(const ProcessGeometry& g, double ext_lo_rad,
                                double ext_hi_rad, int angle_samples,
                                double lambda_lo_um, double lambda_hi_um,
                                const RootOptions& opt = {}) {
  g.validate();
  if (!(angle_samples >= 1)) throw domain_error("tuning_curve: angle_samples >= 1");
  if (!(lambda_hi_um > lambda_lo_um))
    throw domain_error("tuning_curve: empty wavelength range");
  const double f_tol = 1e-3 / g.total_length();
  TuningCurve curve;
  for (int ia = 0; ia < angle_samples; ++ia) {
    const double ext = angle_samples == 1
                           ? ext_lo_rad
                           : ext_lo_rad + (ext_hi_rad - ext_lo_rad) * ia /
                                              (angle_samples - 1);
    auto f = [&](double lum) -> double {
      try {
        const double internal =
            snell_internal(ext, index_o(g.crystal, lum));
        return delta_k(g, lum, internal).delta_kz;
      } catch (const domain_error&) {
        return std::nan("");
      } catch (const geometry_error&) {
        return std::nan("");
      }
    };
    for (const auto& br :
         bracket_scan(f, lambda_lo_um, lambda_hi_um, opt.coarse_samples)) {
      const double root = bisect(f, br, f_tol, opt);
      TuningPoint p;
      p.external_angle_rad = ext;
      p.signal_wavelength_um = root;
      p.idler_wavelength_um = idler_wavelength_um(g, root);
      const double internal = snell_internal(ext, index_o(g.crystal, root));
      const auto mm = delta_k(g, root, internal);
      const double n_i =
          g.type == ProcessType::type1
              ? index_o(g.crystal, mm.idler_wavelength_um)
              : index_e(g.crystal, mm.idler_wavelength_um,
                        g.cut_angle_rad + mm.idler_angle_rad);
      p.idler_external_angle_rad = snell_external(mm.idler_angle_rad, n_i);
      p.branch = root <= g.degenerate_wavelength_um() ? Branch::upper : Branch::lower;
      curve.points.push_back(p);
    }
  }
  return curve;
}

// Cut angle at which the degenerate pair is phase matched collinearly.
inline double collinear_degenerate_cut(const CrystalSpec& crystal,
                                       double pump_um, ProcessType type,
                                       const RootOptions& opt = {}) {
  crystal.validate();
  crystal.require_in_window(pump_um);
  const double deg = 2.0 * pump_um;
  crystal.require_in_window(deg);
  auto f = [&](double theta) -> double {
    if (type == ProcessType::type1)
      return index_e(crystal, pump_um, theta) - index_o(crystal, deg);
    return 2.0 * index_e(crystal, pump_um, theta) - index_o(crystal, deg) -
           index_e(crystal, deg, theta);
  };
  const auto brackets = bracket_scan(f, 1e-6, kPi / 2.0 - 1e-6, opt.coarse_samples);
  if (brackets.empty())
    throw geometry_error("no collinear degenerate phase matching for this pump");
  return bisect(f, brackets.front(), 1e-12, opt);
}

// Signal wavelength at which the ordinary signal group index equals the
// extraordinary pump group index (matched group velocities along the pump).
// Searched between the pump and the degenerate wavelength; the smallest root
// is returned.  Tolerance: |group index difference| < 1e-4.
inline double gvm_wavelength(const ProcessGeometry& g,
                             const RootOptions& opt = {}) {
  g.validate();
  const double target = group_index(g.crystal, Polarization::extraordinary,
                                    g.pump_wavelength_um, g.cut_angle_rad);
  const double lo =
      std::max(g.pump_wavelength_um * 1.001, g.crystal.window_lo_um * 1.001);
  const double hi = g.degenerate_wavelength_um();
  auto f = [&](double lum) {
    return group_index(g.crystal, Polarization::ordinary, lum) - target;
  };
  const auto brackets = bracket_scan(f, lo, hi, opt.coarse_samples);
  if (brackets.empty())
    throw geometry_error("no group-velocity matched wavelength in range");
  return bisect(f, brackets.front(), 1e-4, opt);
}

// Smallest positive internal signal angle phase matching the given signal
// wavelength; used to place a wavelength on the tuning curve.
inline double pm_internal_angle_for_wavelength(const ProcessGeometry& g,
                                               double signal_um,
                                               const RootOptions& opt = {}) {
  const double f_tol = 1e-3 / g.total_length();
  auto f = [&](double angle) -> double {
    try {
      return delta_k(g, signal_um, angle).delta_kz;
    } catch (const geometry_error&) {
      return std::nan("");
    }
  };
  const double angle_max =
      std::min(0.9 * std::asin(1.0 / index_o(g.crystal, signal_um)), 0.6);
  const auto brackets = bracket_scan(f, 0.0, angle_max, opt.coarse_samples);
  if (brackets.empty())
    throw geometry_error("wavelength not phase matched at positive angles");
  return bisect(f, brackets.front(), f_tol, opt);
}

// Tuning-curve point at the group-velocity matched wavelength.
inline TuningPoint gvm_point(const ProcessGeometry& g,
                             const RootOptions& opt = {}) {
  const double lum = gvm_wavelength(g, opt);
  const double internal = pm_internal_angle_for_wavelength(g, lum, opt);
  TuningPoint p;
  p.signal_wavelength_um = lum;
  p.idler_wavelength_um = idler_wavelength_um(g, lum);
  p.external_angle_rad = snell_external(internal, index_o(g.crystal, lum));
  const auto mm = delta_k(g, lum, internal);
  const double n_i = g.type == ProcessType::type1
                         ? index_o(g.crystal, mm.idler_wavelength_um)
                         : index_e(g.crystal, mm.idler_wavelength_um,
                                   g.cut_angle_rad + mm.idler_angle_rad);
  p.idler_external_angle_rad = snell_external(mm.idler_angle_rad, n_i);
  p.branch = lum <= g.degenerate_wavelength_um() ? Branch::upper : Branch::lower;
  return p;
}

}  // namespace pdc
