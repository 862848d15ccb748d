// Gain renormalization checks: the low-gain limit, the direct hyperbolic
// oracle, overflow-safe evaluation at enormous gain, monotone mode
// concentration, photon totals against the mode-resolved intensities, and
// the beamlike growth of the angular spectrum as the crystal orientation
// brings the degenerate ring onto the pump walk-off direction.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pdc/amplitude.hpp"
#include "pdc/highgain.hpp"
#include "pdc/schmidt.hpp"

using namespace pdc;
using Catch::Approx;

namespace {

JointAmplitude double_gaussian(int n, double a, double b) {
  Grid1D gx = Grid1D::linspace(GridKind::internal_angle_rad, -9.0, 9.0, n);
  JointAmplitude amp{gx, gx, Eigen::MatrixXcd(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = gx.value(i) + gx.value(j);
      const double d = gx.value(i) - gx.value(j);
      amp.f(i, j) = std::exp(-s * s / (4.0 * a * a) - d * d / (4.0 * b * b));
    }
  amp.normalize();
  return amp;
}

Eigen::VectorXd from_list(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("occupation reduces to the Schmidt weights at negligible gain") {
  const Eigen::VectorXd weights = from_list({0.4, 0.3, 0.2, 0.1});

  const Eigen::VectorXd tiny = renormalized_weights(weights, 1e-6);
  for (int n = 0; n < weights.size(); ++n)
    CHECK(std::abs(tiny(n) - weights(n)) < 1e-6);

  const Eigen::VectorXd zero = renormalized_weights(weights, 0.0);
  for (int n = 0; n < weights.size(); ++n)
    CHECK(zero(n) == Approx(weights(n)).margin(1e-15));
}

TEST_CASE("occupation matches the direct hyperbolic ratio") {
  const Eigen::VectorXd weights = from_list({0.7, 0.3});
  const double gain = 5.0;
  const double s1 = std::sinh(gain * std::sqrt(0.7));
  const double s2 = std::sinh(gain * std::sqrt(0.3));
  const Eigen::VectorXd occ = renormalized_weights(weights, gain);
  CHECK(occ(0) == Approx(s1 * s1 / (s1 * s1 + s2 * s2)).epsilon(1e-12));
  CHECK(occ(1) == Approx(s2 * s2 / (s1 * s1 + s2 * s2)).epsilon(1e-12));

  // Amplification is disproportionate: the strong mode gains share.
  CHECK(occ(0) / occ(1) > 0.7 / 0.3);
}

TEST_CASE("log-domain evaluation survives gain far beyond overflow") {
  // sinh overflows once its argument passes ~710, so G sqrt(w) = 1549 and
  // 1265 both kill the direct evaluation while the log form stays finite.
  const Eigen::VectorXd weights = from_list({0.6, 0.4});
  const double gain = 2000.0;
  CHECK(std::isinf(std::sinh(gain * std::sqrt(0.4))));  // naive route dies

  const auto summary = summarize_gain(weights, gain);
  CHECK(summary.occupation.allFinite());
  CHECK(summary.occupation.sum() == Approx(1.0).margin(1e-12));
  CHECK(summary.occupation(0) == Approx(1.0));
  CHECK(summary.mode_number == Approx(1.0));
  CHECK(summary.g2 == Approx(2.0));
}

TEST_CASE("gain concentrates the occupation monotonically") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> draw(0.01, 1.01);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd weights(12);
    for (int n = 0; n < 12; ++n) weights(n) = draw(rng);
    weights /= weights.sum();
    std::sort(weights.data(), weights.data() + weights.size(),
              [](double a, double b) { return a > b; });

    const double k0 = 1.0 / weights.squaredNorm();
    double prev = effective_mode_number(renormalized_weights(weights, 0.0));
    CHECK(prev == Approx(k0).margin(1e-12));
    for (int step = 1; step < 20; ++step) {
      const double gain = 20.0 * step / 19.0;
      const double m =
          effective_mode_number(renormalized_weights(weights, gain));
      CHECK(m <= prev + 1e-9);
      prev = m;
    }
    CHECK(prev < k0);
  }
}

TEST_CASE("mode number maps onto the intensity correlation") {
  CHECK(g2_from_mode_number(1.0) == Approx(2.0).epsilon(1e-15));
  CHECK(g2_from_mode_number(2.0) == Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(g2_from_mode_number(0.0), domain_error);

  const auto single = summarize_gain(from_list({1.0}), 3.0);
  CHECK(single.mode_number == Approx(1.0).epsilon(1e-12));
  CHECK(single.g2 == Approx(2.0).epsilon(1e-12));

  const auto pair = summarize_gain(from_list({0.5, 0.5}), 0.0);
  CHECK(pair.mode_number == Approx(2.0).epsilon(1e-12));
  CHECK(pair.g2 == Approx(1.5).epsilon(1e-12));

  // Unnormalized occupations are normalized internally.
  CHECK(effective_mode_number(from_list({2.0, 2.0})) == Approx(2.0));
  CHECK(effective_mode_number(from_list({3.0, 1.0})) == Approx(1.6));
}

TEST_CASE("photon totals follow the hyperbolic occupation") {
  CHECK(total_photons(from_list({0.6, 0.4}), 0.0) == 0.0);

  // sinh^2(asinh(1)) = 1: one photon in a single saturated mode.
  CHECK(total_photons(from_list({1.0}), std::asinh(1.0)) ==
        Approx(1.0).margin(1e-12));

  const Eigen::VectorXd weights = from_list({0.5, 0.3, 0.2});
  CHECK(total_photons(weights, 2.0) < total_photons(weights, 3.0));
  CHECK_THROWS_AS(total_photons(weights, -1.0), domain_error);
}

TEST_CASE("weight validation rejects malformed spectra") {
  CHECK_THROWS_AS(renormalized_weights(Eigen::VectorXd(), 1.0), domain_error);
  CHECK_THROWS_AS(renormalized_weights(from_list({0.5, -0.1}), 1.0),
                  domain_error);
  CHECK_THROWS_AS(renormalized_weights(from_list({0.0, 0.0}), 1.0),
                  domain_error);
  CHECK_THROWS_AS(renormalized_weights(from_list({0.5, 0.5}), -2.0),
                  domain_error);
  CHECK_THROWS_AS(effective_mode_number(from_list({0.0})), domain_error);
}

TEST_CASE("intensity profiles integrate to the photon total") {
  const auto amp = double_gaussian(64, 1.0, 3.0);
  const auto dec = decompose(amp);
  const double gain = 3.0;

  const Eigen::VectorXd ns = signal_intensity(dec, gain);
  const Eigen::VectorXd ni = idler_intensity(dec, gain);
  const double total = total_photons(dec.weights, gain);
  CHECK(ns.sum() * dec.signal_grid.step == Approx(total).epsilon(1e-8));
  CHECK(ni.sum() * dec.idler_grid.step == Approx(total).epsilon(1e-8));

  CHECK(signal_intensity(dec, 0.0).maxCoeff() == 0.0);
}

TEST_CASE("a single mode radiates its own profile") {
  const int n = 64;
  Grid1D gx = Grid1D::linspace(GridKind::internal_angle_rad, -4.0, 4.0, n);
  JointAmplitude amp{gx, gx, Eigen::MatrixXcd(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = gx.value(i), y = gx.value(j);
      amp.f(i, j) = std::exp(-x * x - y * y / 2.0);
    }
  amp.normalize();
  const auto dec = decompose(amp);
  REQUIRE(dec.mode_count() == 1);

  const double gain = 2.0;
  const Eigen::VectorXd ns = signal_intensity(dec, gain);
  const double scale = std::sinh(gain) * std::sinh(gain);
  for (int i = 0; i < n; ++i)
    CHECK(ns(i) == Approx(scale * std::norm(dec.signal_modes(i, 0)))
                       .margin(1e-12 * scale));
}

TEST_CASE("emission-cone estimates from aperture and diffraction") {
  const auto est = divergence_estimates(60e-6, 5e-3, 0.355);
  CHECK(est.geometric_rad == Approx(0.012).epsilon(1e-12));
  CHECK(est.diffraction_rad == Approx(0.355e-6 / 60e-6).epsilon(1e-12));

  // The two estimates cross at the diffraction-balanced aperture sqrt(l L).
  const double balanced = std::sqrt(0.355e-6 * 5e-3);
  const auto eq = divergence_estimates(balanced, 5e-3, 0.355);
  CHECK(eq.geometric_rad == Approx(eq.diffraction_rad).epsilon(1e-12));

  CHECK_THROWS_AS(divergence_estimates(0.0, 5e-3, 0.355), domain_error);
  CHECK_THROWS_AS(divergence_estimates(60e-6, 0.0, 0.355), domain_error);
}

TEST_CASE("peak emission grows as the ring approaches the walk-off direction") {
  // Rotating the cut from 32.5 to 34.9 degrees moves the degenerate ring
  // (0.015 to 0.072 rad internal) onto the pump walk-off direction
  // (~0.075 rad), concentrating the gain into fewer modes; the amplified
  // angular peak must grow by orders of magnitude along the sweep.
  PumpSpec pump;
  pump.waist_fwhm_m = 60e-6;
  const int n = 384;
  Grid1D gs = Grid1D::linspace(GridKind::internal_angle_rad, 0.0, 0.225, n);
  Grid1D gi = Grid1D::linspace(GridKind::internal_angle_rad, -0.225, 0.0, n);

  std::vector<double> peaks;
  for (double cut : {32.5, 33.5, 34.9}) {
    ProcessGeometry g;
    g.crystal = bbo();
    g.type = ProcessType::type1;
    g.pump_wavelength_um = 0.355;
    g.cut_angle_rad = deg_to_rad(cut);
    g.segments = {{5e-3, 0.0}};
    const auto dec = decompose(build_angular_tpa(g, pump, gs, gi));
    peaks.push_back(signal_intensity(dec, 15.0).maxCoeff());
  }
  CHECK(peaks[1] > 10.0 * peaks[0]);
  CHECK(peaks[2] > 10.0 * peaks[1]);
}
