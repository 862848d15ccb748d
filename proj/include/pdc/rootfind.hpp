#pragma once

#include <cmath>
#include <vector>

#include "pdc/errors.hpp"

namespace pdc {

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
};

struct RootOptions {
  int coarse_samples = 400;
  int max_bisections = 200;
};

// Scan [a, b] on a uniform grid and collect sign-change brackets.
// Evaluation points where f returns NaN are skipped.
template <class F>
std::vector<Bracket> bracket_scan(F&& f, double a, double b, int samples) {
  std::vector<Bracket> out;
  if (!(samples >= 2)) throw domain_error("bracket_scan: need at least 2 samples");
  double x_prev = a;
  double f_prev = f(a);
  for (int i = 1; i <= samples; ++i) {
    const double x = a + (b - a) * i / samples;
    const double fx = f(x);
    if (std::isnan(fx)) {
      x_prev = x;
      f_prev = fx;
      continue;
    }
    if (!std::isnan(f_prev) &&
        ((f_prev < 0.0 && fx > 0.0) || (f_prev > 0.0 && fx < 0.0) || f_prev == 0.0)) {
      out.push_back({x_prev, x, f_prev, fx});
    }
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

// Bisect a sign-change bracket until |f| < f_tol (or the interval collapses,
// which for a continuous f implies the same).
template <class F>
double bisect(F&& f, Bracket br, double f_tol,
              const RootOptions& opt = {}) {
  if (br.f_lo == 0.0) return br.lo;
  double lo = br.lo, hi = br.hi, f_lo = br.f_lo;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < opt.max_bisections; ++i) {
    mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) < f_tol) return mid;
    if ((f_lo < 0.0) == (f_mid < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * (1.0 + std::abs(mid))) {
      const double fm = f(0.5 * (lo + hi));
      if (std::abs(fm) < f_tol) return 0.5 * (lo + hi);
      throw numerical_error("bisect: interval collapsed without meeting tolerance");
    }
  }
  throw numerical_error("bisect: iteration limit reached");
}

}  // namespace pdc
