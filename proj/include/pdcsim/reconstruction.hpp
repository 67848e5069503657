#pragma once

#include <Eigen/Dense>
#include <optional>

#include "pdcsim/jsa.hpp"
#include "pdcsim/schmidt.hpp"

namespace pdcsim {

// Multiplicative Richardson-Lucy update, u <- u * (psf' corr (d / (psf * u))),
// initialized with u = d. floor_rel clamps the divide relative to max(d);
// stop_tol > 0 enables early stop on the relative update norm.
Eigen::MatrixXd richardson_lucy(const Eigen::MatrixXd& blurred, const Eigen::MatrixXd& psf,
                                int iterations, double floor_rel = 1e-12,
                                double stop_tol = 0.0);

struct ReconstructionConfig {
  int rl_iterations = 50;
  double rl_floor = 1e-12;
  double rl_stop_tol = 1e-5;
  // Pump amplitude whose arg() supplies the spectral phase applied along the
  // antidiagonal. Empty = zero phase.
  std::optional<SpectralAmplitude> phase_source;
  enum class CenterPolicy { jsi_maximum, grid_center };
  CenterPolicy center_policy = CenterPolicy::jsi_maximum;
};

// sqrt of the JSI with the pump phase applied along nu_s + nu_i, centered per
// cfg.center_policy; Frobenius-normalized.
JointAmplitude reconstruct_jsa(const Eigen::MatrixXd& jsi, const FrequencyGrid& signal_grid,
                               const FrequencyGrid& idler_grid,
                               const ReconstructionConfig& cfg);

struct ReconstructionReport {
  double schmidt_number = 1.0;
  Eigen::VectorXd weights;
  double pruned_schmidt_number = 1.0;  // after keeping the first k_expected modes
  double flatness = 0.0;  // max |lambda_k - 1/k_expected| over the first k_expected
};

ReconstructionReport analyze_reconstruction(const JointAmplitude& reconstructed,
                                            int k_expected, double epsilon = 1e-6);

}  // namespace pdcsim
