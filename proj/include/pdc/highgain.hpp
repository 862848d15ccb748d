#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "pdc/errors.hpp"
#include "pdc/schmidt.hpp"

namespace pdc {

// Parametric gain acts on each Schmidt mode independently: a mode with
// low-gain weight l_n acquires mean photon number sinh^2(G sqrt(l_n)), so the
// normalized high-gain mode occupation is
//   L_n = sinh^2(G sqrt(l_n)) / sum_m sinh^2(G sqrt(l_m)).
// Stronger modes are amplified disproportionately and the effective mode
// number 1 / sum L_n^2 shrinks as the gain grows.

namespace detail {

// ln sinh(x) evaluated without overflow, accurate for both tails.
inline double log_sinh(double x) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return x - kLn2 + std::log1p(-std::exp(-2.0 * x));
}

}  // namespace detail

inline Eigen::VectorXd renormalized_weights(const Eigen::VectorXd& weights,
                                            double gain) {
  if (weights.size() == 0) throw domain_error("empty Schmidt spectrum");
  if (weights.minCoeff() < 0.0)
    throw domain_error("Schmidt weights must be nonnegative");
  const double sum = weights.sum();
  if (!(sum > 0.0)) throw domain_error("Schmidt weights sum to zero");
  if (!(gain >= 0.0)) throw domain_error("gain must be nonnegative");
  if (gain == 0.0) return weights / sum;

  Eigen::VectorXd log_occ(weights.size());
  for (int n = 0; n < weights.size(); ++n)
    log_occ(n) = 2.0 * detail::log_sinh(gain * std::sqrt(weights(n)));
  const double top = log_occ.maxCoeff();
  if (!std::isfinite(top)) throw numerical_error("gain renormalization failed");

  Eigen::VectorXd occ = (log_occ.array() - top).exp();
  return occ / occ.sum();
}

// sum_n sinh^2(G sqrt(l_n)); overflows to inf beyond G sqrt(l) ~ 350.
inline double total_photons(const Eigen::VectorXd& weights, double gain) {
  if (!(gain >= 0.0)) throw domain_error("gain must be nonnegative");
  double total = 0.0;
  for (int n = 0; n < weights.size(); ++n) {
    const double s = std::sinh(gain * std::sqrt(weights(n)));
    total += s * s;
  }
  return total;
}

inline double effective_mode_number(const Eigen::VectorXd& occupation) {
  const double sum = occupation.sum();
  if (!(sum > 0.0)) throw domain_error("empty mode occupation");
  const double purity = occupation.squaredNorm() / (sum * sum);
  return 1.0 / purity;
}

inline double g2_from_mode_number(double mode_number) {
  if (!(mode_number > 0.0)) throw domain_error("mode number must be positive");
  return 1.0 + 1.0 / mode_number;
}

struct GainSummary {
  Eigen::VectorXd occupation;  // L_n, sorted like the input weights
  double total_photons;
  double mode_number;
  double g2;
};

inline GainSummary summarize_gain(const Eigen::VectorXd& weights, double gain) {
  GainSummary out;
  out.occupation = renormalized_weights(weights, gain);
  out.total_photons = total_photons(weights, gain);
  out.mode_number = effective_mode_number(out.occupation);
  out.g2 = g2_from_mode_number(out.mode_number);
  return out;
}

// Mean photon number resolved over the signal grid,
//   N(x) = sum_n |u_n(x)|^2 sinh^2(G sqrt(l_n)),
// whose integral over the grid measure equals total_photons.
inline Eigen::VectorXd signal_intensity(const SchmidtDecomposition& modes,
                                        double gain) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(modes.signal_modes.rows());
  for (int n = 0; n < modes.mode_count(); ++n) {
    const double s = std::sinh(gain * std::sqrt(modes.weights(n)));
    out += s * s * modes.signal_modes.col(n).cwiseAbs2();
  }
  return out;
}

inline Eigen::VectorXd idler_intensity(const SchmidtDecomposition& modes,
                                       double gain) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(modes.idler_modes.rows());
  for (int n = 0; n < modes.mode_count(); ++n) {
    const double s = std::sinh(gain * std::sqrt(modes.weights(n)));
    out += s * s * modes.idler_modes.col(n).cwiseAbs2();
  }
  return out;
}

// Order-of-magnitude half-angle estimates for the emission cone: the
// geometric ratio of the gain aperture to the crystal length, and the
// diffraction angle of the pump wavelength across that aperture.
struct DivergenceEstimates {
  double geometric_rad;
  double diffraction_rad;
};

inline DivergenceEstimates divergence_estimates(double waist_fwhm_m,
                                                double length_m,
                                                double pump_wavelength_um) {
  if (!(waist_fwhm_m > 0.0) || !(length_m > 0.0))
    throw domain_error("divergence estimate needs positive waist and length");
  DivergenceEstimates out;
  out.geometric_rad = waist_fwhm_m / length_m;
  out.diffraction_rad = pump_wavelength_um * 1e-6 / waist_fwhm_m;
  return out;
}

}  // namespace pdc
