#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "pdc/amplitude.hpp"
#include "pdc/config.hpp"
#include "pdc/csv.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/errors.hpp"
#include "pdc/highgain.hpp"
#include "pdc/phasematch.hpp"
#include "pdc/schmidt.hpp"
#include "pdc/svg.hpp"

namespace pdc {

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  bool svg = false;
  int grid_override = 0;     // 0 keeps the configured grid size
  double cutoff = 1e-12;     // relative Schmidt-weight cutoff
};

namespace cli_detail {

inline std::string out_path(const CliOptions& opt, const std::string& name) {
  return (std::filesystem::path(opt.out_dir) / name).string();
}

inline void print_kv(std::ostream& out, const std::string& key, double value) {
  out << key << " " << format_sig9(value) << "\n";
}

// Default wavelength search window for tuning-curve style scans: everything
// between just above the pump and the red edge of the transparency window is
// fair game; out-of-window idlers are rejected inside the scan itself.
inline void tuning_lambda_window(const RunConfig& rc, double* lo_um,
                                 double* hi_um) {
  if (rc.tuning_lambda_lo_nm > 0.0 && rc.tuning_lambda_hi_nm > 0.0) {
    *lo_um = rc.tuning_lambda_lo_nm * 1e-3;
    *hi_um = rc.tuning_lambda_hi_nm * 1e-3;
    return;
  }
  *lo_um = std::max(rc.geometry.pump_wavelength_um * 1.02,
                    rc.crystal.window_lo_um * 1.02);
  *hi_um = std::min(rc.geometry.pump_wavelength_um * 3.5,
                    rc.crystal.window_hi_um * 0.98);
  if (!(*hi_um > *lo_um))
    throw config_error("degenerate default wavelength window; set tuning.wavelength_nm");
}

struct SpectralTarget {
  double wavelength_um = 0.0;
  double internal_angle_rad = 0.0;
  double external_angle_rad = 0.0;
};

inline SpectralTarget target_for_wavelength(const RunConfig& rc,
                                            double lambda_um) {
  SpectralTarget t;
  t.wavelength_um = lambda_um;
  t.internal_angle_rad =
      pm_internal_angle_for_wavelength(rc.geometry, lambda_um);
  t.external_angle_rad =
      snell_external(t.internal_angle_rad, index_o(rc.crystal, lambda_um));
  return t;
}

// Spectral builds are centered on explicit target wavelengths when given,
// otherwise on the phase-matched wavelength at the configured collection
// angle.
inline std::vector<SpectralTarget> spectral_targets(const RunConfig& rc) {
  std::vector<SpectralTarget> out;
  if (!rc.target_wavelength_nm.empty()) {
    for (double nm : rc.target_wavelength_nm)
      out.push_back(target_for_wavelength(rc, nm * 1e-3));
    return out;
  }
  if (rc.has_collection_angle) {
    double lo = 0.0, hi = 0.0;
    tuning_lambda_window(rc, &lo, &hi);
    const TuningCurve curve =
        tuning_curve(rc.geometry, rc.collection_angle_rad,
                     rc.collection_angle_rad, 1, lo, hi);
    if (curve.points.empty())
      throw geometry_error("no phase-matched wavelength at the collection angle");
    const TuningPoint* pick = &curve.points.front();
    for (const auto& p : curve.points)
      if (p.branch == Branch::upper) {
        pick = &p;
        break;
      }
    SpectralTarget t;
    t.wavelength_um = pick->signal_wavelength_um;
    t.internal_angle_rad = snell_internal(
        rc.collection_angle_rad, index_o(rc.crystal, t.wavelength_um));
    t.external_angle_rad = rc.collection_angle_rad;
    out.push_back(t);
    return out;
  }
  throw config_error(
      "spectral run needs grid.target_wavelength_nm or grid.angle_rad");
}

// Half width of the signal frequency window.  Explicit span_nm wins;
// otherwise six pump bandwidths scaled by the group-index mismatch ratio
// (the pump-envelope-limited spread of the phase-matching ridge).
inline double half_span_omega(const RunConfig& rc, double lambda_s_um) {
  if (rc.span_nm > 0.0) {
    const double lo = lambda_s_um - rc.span_nm * 1e-3;
    const double hi = lambda_s_um + rc.span_nm * 1e-3;
    if (!(lo > 0.0)) throw config_error("grid.span_nm too wide for the target");
    return 0.5 * (omega_from_um(lo) - omega_from_um(hi));
  }
  if (!(rc.pump.pulse_fwhm_s > 0.0))
    throw config_error("pump.pulse_fwhm_ps is required for spectral builds");
  const double pump_bw = 4.0 * kLn2 / rc.pump.pulse_fwhm_s;
  const double lambda_i = idler_wavelength_um(rc.geometry, lambda_s_um);
  const double ngp =
      group_index(rc.crystal, Polarization::extraordinary,
                  rc.geometry.pump_wavelength_um, rc.geometry.cut_angle_rad);
  const double ngs = group_index(rc.crystal, Polarization::ordinary, lambda_s_um);
  const double ngi =
      rc.geometry.type == ProcessType::type1
          ? group_index(rc.crystal, Polarization::ordinary, lambda_i)
          : group_index(rc.crystal, Polarization::extraordinary, lambda_i,
                        rc.geometry.cut_angle_rad);
  double ratio = std::abs(ngp - ngi) / std::max(std::abs(ngs - ngi), 1e-6);
  ratio = std::clamp(ratio, 0.5, 20.0);
  return 6.0 * pump_bw * ratio;
}

struct AngularResult {
  Grid1D signal_grid;
  Grid1D idler_grid;
  SchmidtDecomposition modes;
};

inline AngularResult run_angular_pipeline(const RunConfig& rc,
                                          const CliOptions& opt) {
  if (!(rc.pump.waist_fwhm_m > 0.0))
    throw config_error("pump.waist_fwhm_um is required for angular builds");
  const int n = opt.grid_override > 0 ? opt.grid_override : rc.grid_n;
  double s_lo = rc.signal_lo_rad, s_hi = rc.signal_hi_rad;
  double i_lo = rc.idler_lo_rad, i_hi = rc.idler_hi_rad;
  if (!rc.has_signal_range) {
    const double span = 3.0 * walkoff_angle(rc.crystal,
                                            rc.geometry.pump_wavelength_um,
                                            rc.geometry.cut_angle_rad);
    if (!(span > 0.0))
      throw config_error("grid.signal_range_rad required when walk-off vanishes");
    s_lo = -span;
    s_hi = span;
    i_lo = -span;
    i_hi = span;
  }
  AngularResult r;
  r.signal_grid = Grid1D::linspace(GridKind::internal_angle_rad, s_lo, s_hi, n);
  r.idler_grid = Grid1D::linspace(GridKind::internal_angle_rad, i_lo, i_hi, n);
  BuildOptions b;
  b.ignore_gap_phase = rc.ignore_gap_phase;
  const JointAmplitude amp =
      build_angular_tpa(rc.geometry, rc.pump, r.signal_grid, r.idler_grid, b);
  r.modes = decompose(amp, opt.cutoff);
  return r;
}

struct SpectralResult {
  SpectralTarget target;
  Grid1D signal_grid;
  Grid1D idler_grid;
  SchmidtDecomposition modes;
};

inline SpectralResult run_spectral_pipeline(const RunConfig& rc,
                                            const CliOptions& opt,
                                            const SpectralTarget& target) {
  if (!(rc.pump.pulse_fwhm_s > 0.0))
    throw config_error("pump.pulse_fwhm_ps is required for spectral builds");
  const int n = opt.grid_override > 0 ? opt.grid_override : rc.grid_n;
  const double hs = half_span_omega(rc, target.wavelength_um);
  const double omega_s0 = omega_from_um(target.wavelength_um);
  const double omega_i0 =
      omega_from_um(rc.geometry.pump_wavelength_um) - omega_s0;
  SpectralResult r;
  r.target = target;
  r.signal_grid = Grid1D::linspace(GridKind::angular_frequency_rads,
                                   omega_s0 - hs, omega_s0 + hs, n);
  r.idler_grid = Grid1D::linspace(GridKind::angular_frequency_rads,
                                  omega_i0 - hs, omega_i0 + hs, n);
  BuildOptions b;
  b.ignore_gap_phase = rc.ignore_gap_phase;
  const JointAmplitude amp =
      build_spectral_jsa(rc.geometry, rc.pump, target.external_angle_rad,
                         r.signal_grid, r.idler_grid, b);
  r.modes = decompose(amp, opt.cutoff);
  return r;
}

inline int cmd_tuning_curve(const RunConfig& rc, const CliOptions& opt,
                            std::ostream& out) {
  double lo_um = 0.0, hi_um = 0.0;
  tuning_lambda_window(rc, &lo_um, &hi_um);
  const TuningCurve curve =
      tuning_curve(rc.geometry, rc.tuning_lo_rad, rc.tuning_hi_rad,
                   rc.tuning_samples, lo_um, hi_um);

  const std::string path = out_path(opt, "tuning_curve.csv");
  CsvWriter csv(path, rc.config_hash,
                {"external_angle_rad", "signal_wavelength_nm", "branch"});
  for (const auto& p : curve.points)
    csv.row(std::vector<std::string>{
        format_sig9(p.external_angle_rad),
        format_sig9(p.signal_wavelength_um * 1e3),
        p.branch == Branch::upper ? "upper" : "lower"});
  out << "wrote " << path << " (" << curve.points.size() << " rows)\n";

  if (opt.svg && !curve.points.empty()) {
    SvgSeries upper, lower;
    lower.color = "#d62728";
    for (const auto& p : curve.points) {
      SvgSeries& s = p.branch == Branch::upper ? upper : lower;
      s.x.push_back(p.external_angle_rad);
      s.y.push_back(p.signal_wavelength_um * 1e3);
    }
    std::vector<SvgSeries> series;
    if (!upper.x.empty()) series.push_back(upper);
    if (!lower.x.empty()) series.push_back(lower);
    const std::string svg = out_path(opt, "tuning_curve.svg");
    write_svg_line_plot(svg, "phase-matching tuning curve",
                        "external signal angle (rad)",
                        "signal wavelength (nm)", series, false);
    out << "wrote " << svg << "\n";
  }
  return 0;
}

inline int cmd_walkoff(const RunConfig& rc, const CliOptions& opt,
                       std::ostream& out) {
  const double rho = walkoff_angle(rc.crystal, rc.geometry.pump_wavelength_um,
                                   rc.geometry.cut_angle_rad);
  const double lambda_s = rc.geometry.degenerate_wavelength_um();
  const double rho_ext = snell_external(rho, index_o(rc.crystal, lambda_s));
  print_kv(out, "walkoff_internal_rad", rho);
  print_kv(out, "walkoff_internal_deg", rad_to_deg(rho));
  print_kv(out, "walkoff_external_rad", rho_ext);
  print_kv(out, "walkoff_external_deg", rad_to_deg(rho_ext));
  if (rc.pump.waist_fwhm_m > 0.0) {
    const auto d = divergence_estimates(rc.pump.waist_fwhm_m,
                                        rc.geometry.total_length(),
                                        rc.geometry.pump_wavelength_um);
    print_kv(out, "gain_cone_rad", d.geometric_rad);
    print_kv(out, "pump_divergence_rad", d.diffraction_rad);
  }

  const std::string path = out_path(opt, "walkoff_sweep.csv");
  CsvWriter csv(path, rc.config_hash, {"cut_angle_deg", "walkoff_internal_rad"});
  SvgSeries sweep;
  for (int i = 0; i < rc.walkoff_samples; ++i) {
    const double deg = rc.walkoff_sweep_lo_deg +
                       (rc.walkoff_sweep_hi_deg - rc.walkoff_sweep_lo_deg) * i /
                           (rc.walkoff_samples - 1);
    const double w = walkoff_angle(rc.crystal, rc.geometry.pump_wavelength_um,
                                   deg_to_rad(deg));
    csv.row(std::vector<double>{deg, w});
    sweep.x.push_back(deg);
    sweep.y.push_back(w);
  }
  out << "wrote " << path << " (" << rc.walkoff_samples << " rows)\n";
  if (opt.svg) {
    const std::string svg = out_path(opt, "walkoff_sweep.svg");
    write_svg_line_plot(svg, "pump walk-off vs cut angle", "cut angle (deg)",
                        "walk-off (rad)", {sweep}, false);
    out << "wrote " << svg << "\n";
  }
  return 0;
}

inline int cmd_gvm(const RunConfig& rc, const CliOptions& opt,
                   std::ostream& out) {
  (void)opt;
  const TuningPoint p = gvm_point(rc.geometry);
  print_kv(out, "gvm_wavelength_nm", p.signal_wavelength_um * 1e3);
  print_kv(out, "gvm_external_angle_rad", p.external_angle_rad);
  print_kv(out, "gvm_idler_wavelength_nm", p.idler_wavelength_um * 1e3);
  print_kv(out, "gvm_idler_external_angle_rad", p.idler_external_angle_rad);
  out << "branch " << (p.branch == Branch::upper ? "upper" : "lower") << "\n";
  return 0;
}

inline int cmd_angular_spectrum(const RunConfig& rc, const CliOptions& opt,
                                std::ostream& out) {
  if (rc.gain_reference_nm > 0.0)
    throw config_error(
        "gain.reference_wavelength_nm applies to spectral runs only");
  const AngularResult r = run_angular_pipeline(rc, opt);
  const bool mirrored =
      std::abs(r.signal_grid.value(0) + r.idler_grid.stop()) < 1e-9 &&
      std::abs(r.signal_grid.stop() + r.idler_grid.value(0)) < 1e-9;
  if (!mirrored)
    throw config_error(
        "angular-spectrum expects the idler grid to mirror the signal grid");

  const Eigen::VectorXd ns = signal_intensity(r.modes, rc.gain);
  const Eigen::VectorXd ni = idler_intensity(r.modes, rc.gain);
  const double n_signal =
      index_o(rc.crystal, rc.geometry.degenerate_wavelength_um());

  const std::string path = out_path(opt, "angular_spectrum.csv");
  CsvWriter csv(path, rc.config_hash,
                {"external_angle_rad", "N_signal", "N_idler"});
  SvgSeries s_series, i_series;
  i_series.color = "#d62728";
  int peak = 0, collinear = 0;
  for (int j = 0; j < r.signal_grid.count; ++j) {
    const double x = r.signal_grid.value(j);
    const double ext = snell_external(x, n_signal);
    const double n_i_mirror = ni(r.signal_grid.count - 1 - j);
    csv.row(std::vector<double>{ext, ns(j), n_i_mirror});
    s_series.x.push_back(ext);
    s_series.y.push_back(ns(j));
    i_series.x.push_back(ext);
    i_series.y.push_back(n_i_mirror);
    if (ns(j) > ns(peak)) peak = j;
    if (std::abs(x) < std::abs(r.signal_grid.value(collinear))) collinear = j;
  }
  out << "wrote " << path << " (" << r.signal_grid.count << " rows)\n";
  print_kv(out, "total_photons", total_photons(r.modes.weights, rc.gain));
  print_kv(out, "peak_external_angle_rad",
           snell_external(r.signal_grid.value(peak), n_signal));
  if (std::abs(r.signal_grid.value(collinear)) <= r.signal_grid.step &&
      ns(collinear) > 0.0)
    print_kv(out, "peak_over_collinear", ns(peak) / ns(collinear));

  if (opt.svg) {
    const std::string svg = out_path(opt, "angular_spectrum.svg");
    write_svg_line_plot(svg, "angular photon-number spectrum",
                        "external angle (rad)", "log10 photons",
                        {s_series, i_series}, true);
    out << "wrote " << svg << "\n";
  }
  return 0;
}

// When gain.reference_wavelength_nm is set, the configured g is the gain
// observed at that wavelength (the experiment equalizes it between
// geometries by refocusing, which the model does not represent); the run's
// scalar gain G then solves G sqrt(l_0) = g on the reference kernel so that
// the reference spectrum is amplified by sinh^2(g) regardless of geometry.
inline double effective_gain(const RunConfig& rc, const CliOptions& opt,
                             std::ostream& out) {
  if (!(rc.gain_reference_nm > 0.0)) return rc.gain;
  const SpectralTarget ref =
      target_for_wavelength(rc, rc.gain_reference_nm * 1e-3);
  const SpectralResult r = run_spectral_pipeline(rc, opt, ref);
  const double l0 = r.modes.weights(0);
  const double g_run = rc.gain / std::sqrt(l0);
  out << "gain_reference_nm " << format_sig9(rc.gain_reference_nm)
      << " reference_leading_weight " << format_sig9(l0) << " effective_g "
      << format_sig9(g_run) << "\n";
  return g_run;
}

inline int cmd_frequency_spectrum(const RunConfig& rc, const CliOptions& opt,
                                  std::ostream& out) {
  const std::vector<SpectralTarget> targets = spectral_targets(rc);
  const double gain = effective_gain(rc, opt, out);
  std::vector<std::pair<double, double>> rows;
  std::vector<SvgSeries> series;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const SpectralResult r = run_spectral_pipeline(rc, opt, targets[t]);
    const Eigen::VectorXd nw = signal_intensity(r.modes, gain);
    SvgSeries s;
    s.color = colors[t % 4];
    for (int j = r.signal_grid.count - 1; j >= 0; --j) {
      const double lambda_nm = um_from_omega(r.signal_grid.value(j)) * 1e3;
      const double lambda_m = lambda_nm * 1e-9;
      // photons per rad/s -> photons per nm of signal wavelength
      const double per_nm =
          nw(j) * kTwoPi * kSpeedOfLight / (lambda_m * lambda_m) * 1e-9;
      rows.emplace_back(lambda_nm, per_nm);
      s.x.push_back(lambda_nm);
      s.y.push_back(per_nm);
    }
    series.push_back(std::move(s));
    out << "target_wavelength_nm " << format_sig9(targets[t].wavelength_um * 1e3)
        << " external_angle_rad " << format_sig9(targets[t].external_angle_rad)
        << " total_photons "
        << format_sig9(total_photons(r.modes.weights, gain))
        << " effective_modes "
        << format_sig9(effective_mode_number(
               renormalized_weights(r.modes.weights, gain)))
        << "\n";
  }
  std::sort(rows.begin(), rows.end());

  const std::string path = out_path(opt, "frequency_spectrum.csv");
  CsvWriter csv(path, rc.config_hash, {"wavelength_nm", "N_signal"});
  for (const auto& [lambda_nm, value] : rows)
    csv.row(std::vector<double>{lambda_nm, value});
  out << "wrote " << path << " (" << rows.size() << " rows)\n";

  if (opt.svg && !rows.empty()) {
    const std::string svg = out_path(opt, "frequency_spectrum.svg");
    write_svg_line_plot(svg, "frequency spectrum", "signal wavelength (nm)",
                        "log10 photons per nm", series, true);
    out << "wrote " << svg << "\n";
  }
  return 0;
}

inline int cmd_modes(const RunConfig& rc, const CliOptions& opt,
                     std::ostream& out) {
  SchmidtDecomposition modes;
  double gain = rc.gain;
  if (rc.modes_domain == "angular") {
    if (rc.gain_reference_nm > 0.0)
      throw config_error(
          "gain.reference_wavelength_nm applies to spectral runs only");
    modes = run_angular_pipeline(rc, opt).modes;
  } else {
    const std::vector<SpectralTarget> targets = spectral_targets(rc);
    gain = effective_gain(rc, opt, out);
    modes = run_spectral_pipeline(rc, opt, targets.front()).modes;
  }
  const GainSummary g = summarize_gain(modes.weights, gain);
  print_kv(out, "schmidt_number_K", modes.schmidt_number());
  print_kv(out, "effective_modes_m", g.mode_number);
  print_kv(out, "g2", g.g2);
  print_kv(out, "total_photons", g.total_photons);
  const int shown = std::min(rc.modes_count, modes.mode_count());
  for (int n = 0; n < shown; ++n)
    out << "mode " << n << " " << format_sig9(modes.weights(n)) << " "
        << format_sig9(g.occupation(n)) << "\n";

  const std::string path = out_path(opt, "modes.csv");
  CsvWriter csv(path, rc.config_hash, {"n", "schmidt_weight", "gain_weight"});
  for (int n = 0; n < modes.mode_count(); ++n)
    csv.row(std::vector<double>{static_cast<double>(n), modes.weights(n),
                                g.occupation(n)});
  out << "wrote " << path << " (" << modes.mode_count() << " rows)\n";
  return 0;
}

}  // namespace cli_detail

// Dispatch a subcommand; exceptions are mapped to the documented exit codes
// (0 success, 2 configuration, 3 numerical, 4 no solution).
inline int run_command(const std::string& command, const CliOptions& opt,
                       std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  try {
    if (!(opt.cutoff >= 0.0 && opt.cutoff < 1.0))
      throw config_error("--cutoff must lie in [0, 1)");
    if (opt.grid_override != 0 &&
        (opt.grid_override < 16 || opt.grid_override > 4096))
      throw config_error("--grid must lie in [16, 4096]");
    const RunConfig rc = load_run_config(opt.config_path);
    std::filesystem::create_directories(opt.out_dir);
    if (command == "tuning-curve") return cli_detail::cmd_tuning_curve(rc, opt, out);
    if (command == "walkoff") return cli_detail::cmd_walkoff(rc, opt, out);
    if (command == "gvm") return cli_detail::cmd_gvm(rc, opt, out);
    if (command == "angular-spectrum")
      return cli_detail::cmd_angular_spectrum(rc, opt, out);
    if (command == "frequency-spectrum")
      return cli_detail::cmd_frequency_spectrum(rc, opt, out);
    if (command == "modes") return cli_detail::cmd_modes(rc, opt, out);
    throw config_error("unknown command: " + command);
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const geometry_error& e) {
    err << "no solution: " << e.what() << "\n";
    return 4;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace pdc
