// Refractive-index model checks: the built-in beta barium borate coefficients
// against independently evaluated table points, the angle-tuned extraordinary
// index, analytic group index and walk-off against finite differences, and
// the flat-face refraction helpers.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pdc/dispersion.hpp"

using namespace pdc;
using Catch::Approx;

TEST_CASE("built-in crystal reproduces hand-evaluated index points") {
  const CrystalSpec c = bbo();

  // Values computed directly from n^2 = A + B/(l^2 - C) - D l^2 with an
  // independent evaluator, frozen here to 1e-9.
  CHECK(index_o(c, 0.355) == Approx(1.705497002).margin(1e-8));
  CHECK(index_o(c, 0.532) == Approx(1.674967049).margin(1e-8));
  CHECK(index_o(c, 0.710) == Approx(1.664491201).margin(1e-8));
  CHECK(index_o(c, 1.064) == Approx(1.655133427).margin(1e-8));
  CHECK(index_e(c, 0.355, kPi / 2.0) == Approx(1.577454047).margin(1e-8));
  CHECK(index_e(c, 0.710, kPi / 2.0) == Approx(1.548219823).margin(1e-8));

  // Negative uniaxial: principal extraordinary index below ordinary.
  for (double lum : {0.3, 0.5, 0.8, 1.5, 3.0})
    CHECK(index_e(c, lum, kPi / 2.0) < index_o(c, lum));
}

TEST_CASE("angle-tuned extraordinary index interpolates the principal values") {
  const CrystalSpec c = bbo();
  const double lum = 0.5;
  const double no = index_o(c, lum);
  const double ne = index_e(c, lum, kPi / 2.0);

  CHECK(index_e(c, lum, 0.0) == Approx(no).margin(1e-12));
  CHECK(index_e(c, lum, kPi / 2.0) == Approx(ne).margin(1e-12));

  const double mid = index_e(c, lum, 0.3);
  CHECK(mid < no);
  CHECK(mid > ne);

  // Even in theta.
  CHECK(index_e(c, lum, 0.3) == Approx(index_e(c, lum, -0.3)).margin(1e-15));

  // Monotone from n_o down to n_e as theta goes to 90 degrees.
  double prev = index_e(c, lum, 0.0);
  for (int i = 1; i <= 18; ++i) {
    const double next = index_e(c, lum, i * (kPi / 2.0) / 18.0);
    CHECK(next < prev);
    prev = next;
  }

  CHECK(index(c, Polarization::ordinary, lum, 0.4) == Approx(no));
  CHECK(index(c, Polarization::extraordinary, lum, 0.4) ==
        Approx(index_e(c, lum, 0.4)));
}

TEST_CASE("coefficient lists with several resonance poles are accepted") {
  // n^2 = 2.0 + 0.01/(l^2 - 0.005) + 0.008/(l^2 - 0.04) + 0.003 l^2
  const auto s = SellmeierSet::from_coefficients(
      {2.0, 0.01, 0.005, 0.008, 0.04, -0.003});
  CHECK(s.poles.size() == 2);
  CHECK(s.n2(0.6) == Approx(2.054249014085).margin(1e-10));
  CHECK(s.n(0.6) == Approx(1.433265158331).margin(1e-10));

  // Analytic derivative against a centered difference.
  const double h = 1e-6;
  const double fd = (s.n2(0.6 + h) - s.n2(0.6 - h)) / (2.0 * h);
  CHECK(s.dn2_dlambda(0.6) == Approx(fd).epsilon(1e-6));
  const double fdn = (s.n(0.6 + h) - s.n(0.6 - h)) / (2.0 * h);
  CHECK(s.dn_dlambda(0.6) == Approx(fdn).epsilon(1e-6));

  CHECK_THROWS_AS(SellmeierSet::from_coefficients({2.0, 0.01}), config_error);
  CHECK_THROWS_AS(SellmeierSet::from_coefficients({2.0, 0.01, 0.005, 0.008, 0.04}),
                  config_error);
}

TEST_CASE("crystal validation rejects unphysical definitions") {
  CrystalSpec c = bbo();
  c.validate();  // the built-in set is sound

  SECTION("window bounds must be ordered and positive") {
    CrystalSpec bad = bbo();
    bad.window_lo_um = 2.0;
    bad.window_hi_um = 1.0;
    CHECK_THROWS_AS(bad.validate(), domain_error);
    bad.window_lo_um = 0.0;
    CHECK_THROWS_AS(bad.validate(), domain_error);
  }

  SECTION("resonance pole inside the transparency window") {
    CrystalSpec bad = bbo();
    bad.ordinary = SellmeierSet::from_coefficients({2.7, 0.018, 0.25, 0.015});
    CHECK_THROWS_AS(bad.validate(), domain_error);
  }

  SECTION("index must stay above 1 across the window") {
    CrystalSpec bad = bbo();
    bad.extraordinary = SellmeierSet::from_coefficients({0.9, 0.0, 1e-4, 0.0});
    CHECK_THROWS_AS(bad.validate(), domain_error);
  }

  SECTION("wavelengths outside the window are refused") {
    CHECK_THROWS_AS(index_o(c, 0.15), domain_error);
    CHECK_THROWS_AS(index_o(c, 3.6), domain_error);
    CHECK_NOTHROW(index_o(c, 0.2));
  }
}

TEST_CASE("walk-off angle matches the angular derivative of the index") {
  const CrystalSpec c = bbo();

  // Frozen external evaluations of atan((n^2/2) sin(2 theta) (ne^-2 - no^-2)).
  CHECK(rad_to_deg(walkoff_angle(c, 0.355, deg_to_rad(32.97))) ==
        Approx(4.200936).margin(1e-4));
  CHECK(rad_to_deg(walkoff_angle(c, 0.355, deg_to_rad(34.9))) ==
        Approx(4.295758).margin(1e-4));

  CHECK(walkoff_angle(c, 0.355, 0.0) == Approx(0.0).margin(1e-15));
  CHECK(walkoff_angle(c, 0.355, kPi / 2.0) == Approx(0.0).margin(1e-12));

  // tan(rho) = -(1/n) dn/dtheta, checked by centered difference.
  const double h = 1e-5;
  for (double theta : {0.2, 0.5, deg_to_rad(34.9), 1.0, 1.4}) {
    const double n = index_e(c, 0.355, theta);
    const double dn =
        (index_e(c, 0.355, theta + h) - index_e(c, 0.355, theta - h)) /
        (2.0 * h);
    CHECK(walkoff_angle(c, 0.355, theta) ==
          Approx(std::atan(-dn / n)).margin(1e-8));
  }

  // A sweep over the cut angle rises to a single maximum near 45 degrees
  // and falls back towards 90.
  std::vector<double> sweep;
  for (int i = 0; i <= 80; ++i)
    sweep.push_back(walkoff_angle(c, 0.355, deg_to_rad(5.0 + i)));
  int imax = 0;
  for (int i = 0; i < static_cast<int>(sweep.size()); ++i)
    if (sweep[i] > sweep[imax]) imax = i;
  const double peak_deg = 5.0 + imax;
  CHECK(peak_deg > 40.0);
  CHECK(peak_deg < 50.0);
  for (int i = 1; i <= imax; ++i) CHECK(sweep[i] > sweep[i - 1]);
  for (int i = imax + 1; i < static_cast<int>(sweep.size()); ++i)
    CHECK(sweep[i] < sweep[i - 1]);
}

TEST_CASE("analytic group index agrees with finite-difference dispersion") {
  const CrystalSpec c = bbo();

  // Independently frozen finite-difference value near the matched wavelength.
  CHECK(group_index(c, Polarization::ordinary, 0.533) ==
        Approx(1.721554513).epsilon(1e-6));

  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double lum = 0.30 + (2.50 - 0.30) * i / 99.0;
    const double fd = (index_o(c, lum + h) - index_o(c, lum - h)) / (2.0 * h);
    const double ng = index_o(c, lum) - lum * fd;
    CHECK(group_index(c, Polarization::ordinary, lum) ==
          Approx(ng).epsilon(1e-6));
  }
  for (double theta : {kPi / 2.0, 0.6}) {
    for (int i = 0; i < 50; ++i) {
      const double lum = 0.30 + (2.50 - 0.30) * i / 49.0;
      const double fd =
          (index_e(c, lum + h, theta) - index_e(c, lum - h, theta)) / (2.0 * h);
      const double ng = index_e(c, lum, theta) - lum * fd;
      CHECK(group_index(c, Polarization::extraordinary, lum, theta) ==
            Approx(ng).epsilon(1e-6));
    }
  }

  // Group index exceeds phase index in the normal-dispersion region.
  CHECK(group_index(c, Polarization::ordinary, 0.5) > index_o(c, 0.5));
}

TEST_CASE("flat-face refraction round-trips and guards the critical angle") {
  for (double n : {1.5, 1.655, 1.7})
    for (double internal : {-0.3, -0.1, 0.0, 0.05, 0.2, 0.5}) {
      const double ext = snell_external(internal, n);
      CHECK(snell_internal(ext, n) == Approx(internal).margin(1e-12));
    }

  CHECK(snell_external(0.0, 1.66) == 0.0);
  CHECK(snell_external(0.1, 1.66) > 0.1);  // refraction opens the angle
  CHECK_THROWS_AS(snell_external(0.9, 1.66), geometry_error);
}

TEST_CASE("focal-plane offset maps to an external angle") {
  const Angle a = detector_angle(2.6e-3, 26e-3);
  CHECK(a.rad == Approx(0.099668652).margin(1e-9));
  CHECK(a.frame == AngleFrame::external);

  CHECK(detector_angle(0.0, 0.1).rad == 0.0);
  CHECK(detector_angle(-2.6e-3, 26e-3).rad == Approx(-0.099668652).margin(1e-9));
  CHECK_THROWS_AS(detector_angle(1e-3, 0.0), domain_error);
  CHECK_THROWS_AS(detector_angle(1e-3, -0.1), domain_error);
}
