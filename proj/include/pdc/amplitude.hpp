#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "pdc/constants.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/errors.hpp"
#include "pdc/grid.hpp"
#include "pdc/phasematch.hpp"

namespace pdc {

struct PumpSpec {
  double waist_fwhm_m = 0.0;  // transverse intensity FWHM at the crystal
  double pulse_fwhm_s = 0.0;  // temporal intensity FWHM (transform limited)
};

// Angular amplitude of a Gaussian beam, exp(-q^2 w^2 / 4) with
// w = fwhm / sqrt(2 ln 2) (the 1/e^2 intensity radius).
inline double pump_angular_profile(const PumpSpec& p, double q_sum) {
  if (!(p.waist_fwhm_m > 0.0)) throw domain_error("pump waist must be positive");
  const double w = p.waist_fwhm_m / std::sqrt(2.0 * kLn2);
  const double arg = 0.25 * q_sum * q_sum * w * w;
  return std::exp(-arg);
}

// Spectral amplitude of a transform-limited Gaussian pulse of intensity FWHM
// tau: exp(-W^2 tau^2 / (8 ln 2)), W the detuning from the carrier.
inline double pump_spectral_profile(const PumpSpec& p, double detuning_rads) {
  if (!(p.pulse_fwhm_s > 0.0)) throw domain_error("pump duration must be positive");
  const double t2 = p.pulse_fwhm_s * p.pulse_fwhm_s;
  return std::exp(-detuning_rads * detuning_rads * t2 / (8.0 * kLn2));
}

// sin(x)/x with a Taylor branch to stay smooth through zero.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Collinear transfer function of a segmented crystal stack.  Each segment of
// length L contributes L sinc(dk L/2) exp(i dk L/2), phased by the mismatch
// accumulated in all preceding crystals (dk) and vacuum gaps (dk_gap); the sum
// is normalized by the total crystal length.  Zero gaps make consecutive
// segments coalesce exactly into one longer crystal.
inline std::complex<double> phase_matching_function(
    const std::vector<Segment>& segments, double dk, double dk_gap = 0.0) {
  if (segments.empty()) throw domain_error("empty segment stack");
  double total = 0.0;
  for (const auto& s : segments) total += s.length_m;
  std::complex<double> sum{0.0, 0.0};
  double phase = 0.0;
  for (const auto& s : segments) {
    const double half = 0.5 * dk * s.length_m;
    const std::complex<double> seg =
        s.length_m * sinc(half) *
        std::exp(std::complex<double>(0.0, half + phase));
    sum += seg;
    phase += dk * s.length_m + dk_gap * s.gap_after_m;
  }
  return sum / total;
}

// Discretized joint two-photon amplitude.  Rows follow the signal grid,
// columns the idler grid.
struct JointAmplitude {
  Grid1D signal;
  Grid1D idler;
  Eigen::MatrixXcd f;

  double measure() const { return signal.step * idler.step; }

  // sum |f|^2 dx_s dx_i
  double squared_sum() const { return f.squaredNorm() * measure(); }

  void normalize() {
    const double s = squared_sum();
    if (!(s > 0.0) || !std::isfinite(s))
      throw numerical_error("joint amplitude has no weight to normalize");
    f /= std::sqrt(s);
  }
};

struct BuildOptions {
  bool ignore_gap_phase = false;
  // scales the pump anisotropy (walk-off) term; 0 removes it (test hook)
  double walkoff_scale = 1.0;
  // angular build: monochromatic signal wavelength, 0 = degenerate (2 l_p)
  double signal_wavelength_um = 0.0;
  bool normalize = true;
};

namespace detail {

inline double vacuum_kz(double omega, double q) {
  const double k = omega / kSpeedOfLight;
  const double kz2 = k * k - q * q;
  return kz2 > 0.0 ? std::sqrt(kz2) : 0.0;
}

}  // namespace detail

// Monochromatic angle-angle amplitude
//   F(x_s, x_i) = pump_angular(q_s + q_i) Phi(dk_z),
//   dk_z = k_p - k_s cos x_s - k_i cos x_i - rho_p (q_s + q_i),
// with rho_p = tan(pump walk-off).  The anisotropy term is the first-order
// expansion of the extraordinary pump's k_z over its angular spectrum; with
// positive angles on the walk-off side of the optic axis it enters with a
// minus sign.
inline JointAmplitude build_angular_tpa(const ProcessGeometry& g,
                                        const PumpSpec& pump,
                                        const Grid1D& signal_grid,
                                        const Grid1D& idler_grid,
                                        const BuildOptions& opt = {}) {
  g.validate();
  signal_grid.validate();
  idler_grid.validate();
  if (signal_grid.kind != GridKind::internal_angle_rad ||
      idler_grid.kind != GridKind::internal_angle_rad)
    throw domain_error("angular build expects internal-angle grids");

  const double lambda_s = opt.signal_wavelength_um > 0.0
                              ? opt.signal_wavelength_um
                              : g.degenerate_wavelength_um();
  const double lambda_i = idler_wavelength_um(g, lambda_s);
  g.crystal.require_in_window(lambda_s);
  g.crystal.require_in_window(lambda_i);

  const double k_p = wavenumber(
      index_e(g.crystal, g.pump_wavelength_um, g.cut_angle_rad),
      g.pump_wavelength_um);
  const double rho_p = opt.walkoff_scale *
                       std::tan(walkoff_angle(g.crystal, g.pump_wavelength_um,
                                              g.cut_angle_rad));
  const double k_s = wavenumber(index_o(g.crystal, lambda_s), lambda_s);
  const double omega_p = omega_from_um(g.pump_wavelength_um);
  const double omega_s = omega_from_um(lambda_s);
  const double omega_i = omega_p - omega_s;

  JointAmplitude amp{signal_grid, idler_grid,
                     Eigen::MatrixXcd(signal_grid.count, idler_grid.count)};

  std::vector<double> k_i(idler_grid.count), q_i(idler_grid.count),
      kz_i(idler_grid.count);
  for (int j = 0; j < idler_grid.count; ++j) {
    const double x = idler_grid.value(j);
    const double n = g.type == ProcessType::type1
                         ? index_o(g.crystal, lambda_i)
                         : index_e(g.crystal, lambda_i, g.cut_angle_rad + x);
    k_i[j] = wavenumber(n, lambda_i);
    q_i[j] = k_i[j] * std::sin(x);
    kz_i[j] = k_i[j] * std::cos(x);
  }

  for (int i = 0; i < signal_grid.count; ++i) {
    const double x_s = signal_grid.value(i);
    const double q_s = k_s * std::sin(x_s);
    const double kz_s = k_s * std::cos(x_s);
    for (int j = 0; j < idler_grid.count; ++j) {
      const double q_sum = q_s + q_i[j];
      const double dk = k_p - kz_s - kz_i[j] - rho_p * q_sum;
      double dk_gap = 0.0;
      if (!opt.ignore_gap_phase) {
        dk_gap = detail::vacuum_kz(omega_p, q_sum) -
                 detail::vacuum_kz(omega_s, q_s) -
                 detail::vacuum_kz(omega_i, q_i[j]);
      }
      amp.f(i, j) = pump_angular_profile(pump, q_sum) *
                    phase_matching_function(g.segments, dk, dk_gap);
    }
  }
  if (opt.normalize) amp.normalize();
  return amp;
}

// Frequency-frequency amplitude at a fixed external signal angle, plane-wave
// pump.  The emission geometry is frozen at the tuning-curve wavelength whose
// external angle equals the collection angle: signal, idler, and pump keep
// the directions of that phase-matched ray, and a frequency pair accumulates
// mismatch through the change of the wavevector magnitudes along those rays,
//   dk(w_s, w_i) = [k_p(w_s + w_i) - k_p0] - [k_s(w_s) - k_s0]
//                                          - [k_i(w_i) - k_i0],
// which vanishes at the matched pair and whose first order is the
// group-velocity mismatch of each pulse against the pump.  A pulse that is
// group matched therefore stays phase matched over the whole stack, which is
// what builds up the narrowband peak.  Gap phases come from the vacuum
// wavevectors projected on the pump axis at the frozen external directions.
inline JointAmplitude build_spectral_jsa(const ProcessGeometry& g,
                                         const PumpSpec& pump,
                                         double signal_external_angle_rad,
                                         const Grid1D& signal_grid,
                                         const Grid1D& idler_grid,
                                         const BuildOptions& opt = {}) {
  g.validate();
  signal_grid.validate();
  idler_grid.validate();
  if (signal_grid.kind != GridKind::angular_frequency_rads ||
      idler_grid.kind != GridKind::angular_frequency_rads)
    throw domain_error("spectral build expects angular-frequency grids");

  const double omega_p0 = omega_from_um(g.pump_wavelength_um);

  // Wavelength on the tuning curve collected by the given external angle,
  // searched over the signal window; where the curve folds back through the
  // window, the root nearest the window centre wins.
  const double omega_lo =
      std::min(signal_grid.value(0), signal_grid.value(signal_grid.count - 1));
  const double omega_hi =
      std::max(signal_grid.value(0), signal_grid.value(signal_grid.count - 1));
  const double lum_lo = um_from_omega(omega_hi);
  const double lum_hi = um_from_omega(omega_lo);
  auto angle_miss = [&](double lum) -> double {
    try {
      const double internal = pm_internal_angle_for_wavelength(g, lum);
      return snell_external(internal, index_o(g.crystal, lum)) -
             signal_external_angle_rad;
    } catch (const std::runtime_error&) {
      return std::nan("");
    }
  };
  const auto brackets = bracket_scan(angle_miss, lum_lo, lum_hi, 96);
  if (brackets.empty())
    throw geometry_error(
        "collection angle does not meet the tuning curve inside the signal window");
  const double lum_centre = um_from_omega(0.5 * (omega_lo + omega_hi));
  double lambda_s0 = 0.0;
  for (const auto& br : brackets) {
    const double root = bisect(angle_miss, br, 1e-7);
    if (lambda_s0 == 0.0 ||
        std::abs(root - lum_centre) < std::abs(lambda_s0 - lum_centre))
      lambda_s0 = root;
  }

  const double internal_s0 = pm_internal_angle_for_wavelength(g, lambda_s0);
  const auto mm0 = delta_k(g, lambda_s0, internal_s0);
  const double lambda_i0 = mm0.idler_wavelength_um;
  const double omega_s0 = omega_from_um(lambda_s0);
  const double omega_i0 = omega_p0 - omega_s0;
  const double idler_dir = g.cut_angle_rad + mm0.idler_angle_rad;
  const double k_s0 =
      wavenumber(index_o(g.crystal, lambda_s0), lambda_s0);
  const double n_i0 = g.type == ProcessType::type1
                          ? index_o(g.crystal, lambda_i0)
                          : index_e(g.crystal, lambda_i0, idler_dir);
  const double k_i0 = wavenumber(n_i0, lambda_i0);
  const double k_p0 = wavenumber(
      index_e(g.crystal, g.pump_wavelength_um, g.cut_angle_rad),
      g.pump_wavelength_um);
  const double cos_ext_s = std::cos(signal_external_angle_rad);
  const double cos_ext_i =
      std::cos(snell_external(mm0.idler_angle_rad, n_i0));

  JointAmplitude amp{signal_grid, idler_grid,
                     Eigen::MatrixXcd(signal_grid.count, idler_grid.count)};

  std::vector<double> dk_i(idler_grid.count), dw_i(idler_grid.count);
  for (int j = 0; j < idler_grid.count; ++j) {
    const double omega_i = idler_grid.value(j);
    const double lambda_i = um_from_omega(omega_i);
    g.crystal.require_in_window(lambda_i);
    const double n_i = g.type == ProcessType::type1
                           ? index_o(g.crystal, lambda_i)
                           : index_e(g.crystal, lambda_i, idler_dir);
    dk_i[j] = wavenumber(n_i, lambda_i) - k_i0;
    dw_i[j] = omega_i - omega_i0;
  }

  for (int i = 0; i < signal_grid.count; ++i) {
    const double omega_s = signal_grid.value(i);
    const double lambda_s = um_from_omega(omega_s);
    g.crystal.require_in_window(lambda_s);
    const double dk_s =
        wavenumber(index_o(g.crystal, lambda_s), lambda_s) - k_s0;
    const double dw_s = omega_s - omega_s0;
    for (int j = 0; j < idler_grid.count; ++j) {
      const double omega_sum = omega_s + idler_grid.value(j);
      const double lambda_sum = um_from_omega(omega_sum);
      g.crystal.require_in_window(lambda_sum);
      const double dk_p =
          wavenumber(index_e(g.crystal, lambda_sum, g.cut_angle_rad),
                     lambda_sum) -
          k_p0;
      const double dk = dk_p - dk_s - dk_i[j];
      double dk_gap = 0.0;
      if (!opt.ignore_gap_phase) {
        dk_gap = ((omega_sum - omega_p0) - dw_s * cos_ext_s -
                  dw_i[j] * cos_ext_i) /
                 kSpeedOfLight;
      }
      amp.f(i, j) = pump_spectral_profile(pump, omega_sum - omega_p0) *
                    phase_matching_function(g.segments, dk, dk_gap);
    }
  }
  if (opt.normalize) amp.normalize();
  return amp;
}

}  // namespace pdc
