#include "pdcsim/jsa.hpp"

#include <cmath>
#include <numbers>

namespace pdcsim {

JointAmplitude build_jsa(const SpectralAmplitude& pump, const PhaseMatchSpec& pm,
                         const FrequencyGrid& signal_grid, const FrequencyGrid& idler_grid) {
  validate(pm);

  // The pump is evaluated at its own grid center plus the antidiagonal
  // detuning; check coverage at the grid corners up front.
  const double u_min = (signal_grid.min() - pm.signal_center_thz) + (idler_grid.min() - pm.idler_center_thz);
  const double u_max = (signal_grid.max() - pm.signal_center_thz) + (idler_grid.max() - pm.idler_center_thz);
  if (pump.grid.center() + u_min < pump.grid.min() || pump.grid.center() + u_max > pump.grid.max())
    throw config_error("pump grid does not cover the antidiagonal range [" +
                       std::to_string(u_min) + ", " + std::to_string(u_max) + "] THz");

  Eigen::MatrixXcd f(signal_grid.size(), idler_grid.size());
  for (int s = 0; s < signal_grid.size(); ++s) {
    const double ds = signal_grid.point(s) - pm.signal_center_thz;
    for (int i = 0; i < idler_grid.size(); ++i) {
      const double di = idler_grid.point(i) - pm.idler_center_thz;
      const std::complex<double> alpha = interpolate(pump, pump.grid.center() + ds + di);
      f(s, i) = alpha * phasematch_amplitude(pm, signal_grid.point(s), idler_grid.point(i));
    }
  }
  const double norm = f.norm();
  if (norm <= 0.0) throw numeric_error("joint amplitude vanishes on the grid");
  f /= norm;
  return JointAmplitude{signal_grid, idler_grid, std::move(f)};
}

double filter_amplitude(const FilterSpec& spec, double nu_thz) {
  if (spec.fwhm_thz <= 0.0) throw config_error("filter fwhm must be positive");
  const double x = (nu_thz - spec.center_thz) / spec.fwhm_thz;
  switch (spec.profile) {
    case FilterProfile::rectangular:
      return std::abs(x) <= 0.5 ? 1.0 : 0.0;
    case FilterProfile::gaussian:
      return std::exp(-2.0 * std::numbers::ln2 * x * x);  // sqrt of the intensity profile
    case FilterProfile::supergaussian: {
      const double y = std::pow(4.0 * x * x, spec.order);
      return std::exp(-0.5 * std::numbers::ln2 * y);
    }
  }
  return 0.0;
}

FilteredJsa apply_filters(const JointAmplitude& jsa, const FilterSpec& signal_filter,
                          const FilterSpec& idler_filter) {
  Eigen::MatrixXcd f = jsa.values;
  for (int s = 0; s < jsa.signal_grid.size(); ++s)
    f.row(s) *= filter_amplitude(signal_filter, jsa.signal_grid.point(s));
  for (int i = 0; i < jsa.idler_grid.size(); ++i)
    f.col(i) *= filter_amplitude(idler_filter, jsa.idler_grid.point(i));

  const double transmitted = f.squaredNorm() / jsa.values.squaredNorm();
  if (transmitted <= 0.0) throw numeric_error("filters block the entire joint amplitude");
  f /= f.norm();
  return FilteredJsa{JointAmplitude{jsa.signal_grid, jsa.idler_grid, std::move(f)}, transmitted};
}

double g2_from_k(double schmidt_number) {
  if (schmidt_number < 1.0) throw config_error("Schmidt number must be >= 1");
  return 1.0 + 1.0 / schmidt_number;
}

double k_from_g2(double g2) {
  if (g2 <= 1.0 || g2 > 2.0) throw config_error("g2 must lie in (1, 2]");
  return 1.0 / (g2 - 1.0);
}

namespace {

// Unitary centered DFT: kernel exp(-2*pi*i*nu_m*t_j) / sqrt(n).
Eigen::MatrixXcd dft_matrix(const FrequencyGrid& grid, std::vector<double>& times_ps) {
  const int n = grid.size();
  const double dt = 1.0 / (n * grid.spacing());
  times_ps.resize(n);
  for (int j = 0; j < n; ++j) times_ps[j] = (j - n / 2) * dt;
  Eigen::MatrixXcd u(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      const double theta = -2.0 * std::numbers::pi * grid.point(m) * times_ps[j];
      u(j, m) = scale * std::complex<double>(std::cos(theta), std::sin(theta));
    }
  return u;
}

}  // namespace

JointTimeIntensity jti(const JointAmplitude& jsa) {
  JointTimeIntensity out;
  const Eigen::MatrixXcd us = dft_matrix(jsa.signal_grid, out.signal_times_ps);
  const Eigen::MatrixXcd ui = dft_matrix(jsa.idler_grid, out.idler_times_ps);
  const Eigen::MatrixXcd t = us * jsa.values * ui.transpose();
  out.intensity = t.cwiseAbs2();
  return out;
}

}  // namespace pdcsim
