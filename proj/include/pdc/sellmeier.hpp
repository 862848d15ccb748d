#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pdc/errors.hpp"

namespace pdc {

// Dispersion model with l in micrometers:
//   n^2(l) = A + sum_i B_i / (l^2 - C_i) - D * l^2.
// Coefficient lists are laid out [A, B_1, C_1, ..., B_k, C_k, D]; the common
// single-pole sets are the four-coefficient case.
struct SellmeierSet {
  double constant = 0.0;                     // A
  std::vector<std::array<double, 2>> poles;  // (B_i, C_i)
  double quadratic = 0.0;                    // D

  static SellmeierSet from_coefficients(const std::vector<double>& coeff) {
    if (coeff.size() < 4 || coeff.size() % 2 != 0)
      throw config_error(
          "Sellmeier coefficient list must be [A, B1, C1, ..., D] with even "
          "length >= 4, got " +
          std::to_string(coeff.size()) + " values");
    SellmeierSet s;
    s.constant = coeff.front();
    s.quadratic = coeff.back();
    for (std::size_t i = 1; i + 2 < coeff.size(); i += 2)
      s.poles.push_back({coeff[i], coeff[i + 1]});
    return s;
  }

  double n2(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    double v = constant - quadratic * l2;
    for (const auto& p : poles) v += p[0] / (l2 - p[1]);
    return v;
  }

  double n(double lambda_um) const { return std::sqrt(n2(lambda_um)); }

  // d(n^2)/dl, analytic
  double dn2_dlambda(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    double v = -2.0 * quadratic * lambda_um;
    for (const auto& p : poles) {
      const double den = l2 - p[1];
      v -= 2.0 * p[0] * lambda_um / (den * den);
    }
    return v;
  }

  // dn/dl, analytic
  double dn_dlambda(double lambda_um) const {
    return 0.5 * dn2_dlambda(lambda_um) / n(lambda_um);
  }
};

// Uniaxial crystal: ordinary set plus the principal (90 deg) extraordinary set,
// valid inside the declared transparency window.
struct CrystalSpec {
  std::string name;
  SellmeierSet ordinary;
  SellmeierSet extraordinary;
  double window_lo_um = 0.0;
  double window_hi_um = 0.0;

  void require_in_window(double lambda_um) const {
    if (!(lambda_um > window_lo_um && lambda_um < window_hi_um))
      throw domain_error(name + ": wavelength " + std::to_string(lambda_um) +
                         " um outside transparency window [" +
                         std::to_string(window_lo_um) + ", " +
                         std::to_string(window_hi_um) + "]");
  }

  // Sanity checks: window ordered, resonance poles outside the window,
  // indices real and above 1 across the window.
  void validate() const {
    if (!(window_lo_um > 0.0 && window_hi_um > window_lo_um))
      throw domain_error(name + ": bad transparency window");
    for (const SellmeierSet* s : {&ordinary, &extraordinary}) {
      for (const auto& p : s->poles)
        if (p[1] >= window_lo_um * window_lo_um &&
            p[1] <= window_hi_um * window_hi_um)
          throw domain_error(name +
                             ": Sellmeier pole inside transparency window");
      const int samples = 64;
      for (int i = 0; i <= samples; ++i) {
        const double l = window_lo_um + (window_hi_um - window_lo_um) *
                                            (i + 0.5) / (samples + 1);
        if (!(s->n2(l) > 1.0))
          throw domain_error(name + ": index not above 1 inside window");
      }
    }
  }
};

// Built-in beta barium borate coefficients (lambda in um, window 0.189-3.5 um).
inline CrystalSpec bbo() {
  CrystalSpec c;
  c.name = "BBO";
  c.ordinary = SellmeierSet::from_coefficients({2.7405, 0.0184, 0.0179, 0.0155});
  c.extraordinary =
      SellmeierSet::from_coefficients({2.3730, 0.0128, 0.0156, 0.0044});
  c.window_lo_um = 0.189;
  c.window_hi_um = 3.5;
  return c;
}

}  // namespace pdc
