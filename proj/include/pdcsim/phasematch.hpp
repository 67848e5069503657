#pragma once

#include <Eigen/Dense>

#include "pdcsim/grid.hpp"

namespace pdcsim {

enum class PhaseMatchProfile { sinc, gaussian };

// Ridge in the (signal, idler) frequency plane at angle theta from the signal
// axis. The profile is a function of the coordinate perpendicular to the
// ridge, p = -ds*sin(theta) + di*cos(theta); bandwidth is the intensity FWHM
// along p.
struct PhaseMatchSpec {
  PhaseMatchProfile profile = PhaseMatchProfile::gaussian;
  double angle_deg = 45.0;
  double bandwidth_thz = 1.0;
  double signal_center_thz = 0.0;
  double idler_center_thz = 0.0;
};

void validate(const PhaseMatchSpec& spec);

// Unnormalized amplitude at absolute frequencies (nu_s, nu_i).
double phasematch_amplitude(const PhaseMatchSpec& spec, double nu_s, double nu_i);

// Sampled phase-matching function, Frobenius-normalized; rows index signal,
// columns idler.
Eigen::MatrixXd make_phasematching(const PhaseMatchSpec& spec,
                                   const FrequencyGrid& signal_grid,
                                   const FrequencyGrid& idler_grid);

}  // namespace pdcsim
