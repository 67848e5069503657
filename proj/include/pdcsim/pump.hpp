#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "pdcsim/grid.hpp"

namespace pdcsim {

enum class PumpShape { gaussian, hermite_gauss, cosine_kernel, weighted_timebins };

// All widths are intensity FWHM. A cosine-kernel pump of order n is the
// frequency representation of n+1 equally spaced Gaussian time bins; with
// weighted_timebins the per-bin intensity weights are free.
struct PumpSpec {
  PumpShape shape = PumpShape::gaussian;
  int order = 0;                        // hermite_gauss / cosine_kernel order
  double center_thz = 0.0;              // nu0
  double fwhm_thz = 1.0;                // intensity FWHM of the Gaussian envelope
  double chirp_ps2 = 0.0;               // quadratic spectral phase coefficient
  double bin_separation_ps = 0.0;       // Delta t between time bins (CK / timebins)
  std::vector<double> bin_weights;      // weighted_timebins only; nonneg, sum 1
  double shaper_resolution_thz = 0.0;   // 0 = ideal shaper
};

// Complex spectral amplitude sampled on a uniform grid, L2-normalized:
// sum |v|^2 * spacing == 1.
struct SpectralAmplitude {
  FrequencyGrid grid;
  Eigen::VectorXcd values;

  double l2_norm() const;
};

SpectralAmplitude make_pump(const PumpSpec& spec, const FrequencyGrid& grid);

// Linear interpolation of the complex amplitude; throws config_error outside
// the grid range.
std::complex<double> interpolate(const SpectralAmplitude& a, double nu_thz);

struct TimeProfile {
  std::vector<double> times_ps;
  Eigen::VectorXcd values;

  double l2_norm() const;
};

// Unitary Fourier transform, kernel exp(-2*pi*i*nu*t); t = 0 maps to the
// center of the returned time grid.
TimeProfile pump_time_profile(const SpectralAmplitude& pump);

}  // namespace pdcsim
