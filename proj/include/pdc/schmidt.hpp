#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "pdc/amplitude.hpp"
#include "pdc/errors.hpp"
#include "pdc/grid.hpp"

namespace pdc {

// Schmidt form of a normalized joint amplitude,
//   F(x_s, x_i) = sum_n sqrt(l_n) u_n(x_s) v_n(x_i),
// with the mode functions orthonormal under the grid measure
// (sum |u_n|^2 dx = 1) and weights l_n sorted descending, sum 1.
struct SchmidtDecomposition {
  Eigen::VectorXd weights;
  Eigen::MatrixXcd signal_modes;  // column n samples u_n on the signal grid
  Eigen::MatrixXcd idler_modes;   // column n samples v_n on the idler grid
  Grid1D signal_grid;
  Grid1D idler_grid;

  int mode_count() const { return static_cast<int>(weights.size()); }

  // 1 / sum l_n^2
  double schmidt_number() const {
    const double s = weights.squaredNorm();
    if (!(s > 0.0)) throw numerical_error("empty Schmidt spectrum");
    return 1.0 / s;
  }
};

// Singular-value decomposition of the measure-weighted amplitude matrix.
// Weights below relative_cutoff * l_1 are discarded and the remainder is
// renormalized to sum 1.  Mode phases are fixed by making each u_n real and
// positive at its largest-magnitude sample, absorbing the compensating phase
// into v_n.
inline SchmidtDecomposition decompose(const JointAmplitude& amp,
                                      double relative_cutoff = 1e-12) {
  if (!(relative_cutoff >= 0.0 && relative_cutoff < 1.0))
    throw domain_error("relative cutoff must lie in [0, 1)");
  const double total = amp.squared_sum();
  if (std::abs(total - 1.0) > 1e-6)
    throw domain_error("decompose expects a normalized joint amplitude");

  const double scale = std::sqrt(amp.measure());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amp.f * scale,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double sum2 = sigma.squaredNorm();
  if (!(sum2 > 0.0)) throw numerical_error("amplitude has no singular weight");

  const double cutoff = relative_cutoff * sigma(0) * sigma(0) / sum2;
  int keep = 0;
  for (int n = 0; n < sigma.size(); ++n)
    if (sigma(n) * sigma(n) / sum2 >= cutoff && sigma(n) > 0.0) ++keep;
  if (keep == 0) keep = 1;

  SchmidtDecomposition out;
  out.signal_grid = amp.signal;
  out.idler_grid = amp.idler;
  out.weights.resize(keep);
  double kept_sum = 0.0;
  for (int n = 0; n < keep; ++n) {
    out.weights(n) = sigma(n) * sigma(n) / sum2;
    kept_sum += out.weights(n);
  }
  out.weights /= kept_sum;

  out.signal_modes = svd.matrixU().leftCols(keep) / std::sqrt(amp.signal.step);
  out.idler_modes =
      svd.matrixV().leftCols(keep).conjugate() / std::sqrt(amp.idler.step);

  for (int n = 0; n < keep; ++n) {
    int peak = 0;
    out.signal_modes.col(n).cwiseAbs().maxCoeff(&peak);
    const std::complex<double> z = out.signal_modes(peak, n);
    if (std::abs(z) > 0.0) {
      const std::complex<double> phase = z / std::abs(z);
      out.signal_modes.col(n) /= phase;
      out.idler_modes.col(n) *= phase;
    }
  }
  return out;
}

}  // namespace pdc
