#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdcsim/grid.hpp"
#include "pdcsim/phasematch.hpp"
#include "pdcsim/pump.hpp"

namespace pdcsim {

// Joint spectral amplitude f(nu_s, nu_i); rows index signal, columns idler.
// Frobenius norm 1.
struct JointAmplitude {
  FrequencyGrid signal_grid;
  FrequencyGrid idler_grid;
  Eigen::MatrixXcd values;
};

// f = alpha(nu_s + nu_i) * Phi(nu_s, nu_i). The pump amplitude is evaluated
// at pump.grid.center() + (ds + di), with detunings taken from the
// phase-matching centers; linear interpolation between pump samples.
JointAmplitude build_jsa(const SpectralAmplitude& pump, const PhaseMatchSpec& pm,
                         const FrequencyGrid& signal_grid,
                         const FrequencyGrid& idler_grid);

enum class FilterProfile { rectangular, gaussian, supergaussian };

struct FilterSpec {
  double center_thz = 0.0;
  double fwhm_thz = 1.0;      // intensity FWHM
  FilterProfile profile = FilterProfile::rectangular;
  int order = 2;              // supergaussian only
};

// Amplitude transmission (square root of the intensity profile).
double filter_amplitude(const FilterSpec& spec, double nu_thz);

struct FilteredJsa {
  JointAmplitude jsa;
  double transmitted_fraction;  // pre-normalization |f|^2 fraction kept
};

FilteredJsa apply_filters(const JointAmplitude& jsa, const FilterSpec& signal_filter,
                          const FilterSpec& idler_filter);

// g2 = 1 + 1/K for low-gain multimode thermal marginals, and its inverse.
double g2_from_k(double schmidt_number);
double k_from_g2(double g2);

struct JointTimeIntensity {
  std::vector<double> signal_times_ps;
  std::vector<double> idler_times_ps;
  Eigen::MatrixXd intensity;  // sums to |f|^2 total (Parseval)
};

// Squared modulus of the unitary 2D Fourier transform of the JSA; t = 0 at
// the center of each time axis.
JointTimeIntensity jti(const JointAmplitude& jsa);

}  // namespace pdcsim
