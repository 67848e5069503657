#pragma once

#include <Eigen/Dense>

#include "pdcsim/jsa.hpp"

namespace pdcsim {

// Schmidt decomposition f = sum_k sqrt(lambda_k) psi_k(nu_s) phi_k(nu_i).
// Weights are normalized to sum 1; mode columns are orthonormal on their
// grids (plain vector inner product).
struct SchmidtData {
  Eigen::VectorXd coefficients;   // sqrt(lambda_k), descending
  Eigen::VectorXd weights;        // lambda_k
  Eigen::MatrixXcd signal_modes;  // columns psi_k
  Eigen::MatrixXcd idler_modes;   // columns phi_k
  double schmidt_number = 1.0;    // K = 1 / sum lambda_k^2
  int schmidt_rank = 1;           // #{lambda_k > epsilon * lambda_0}
};

double schmidt_number_from_weights(const Eigen::VectorXd& weights);

// SVD of the JSA matrix. epsilon is the rank threshold relative to the
// largest weight.
SchmidtData schmidt_decompose(const JointAmplitude& jsa, double epsilon = 1e-6);

// Truncate to the first `keep` modes and renormalize the weights.
SchmidtData prune_spurious_modes(const SchmidtData& sd, int keep);

}  // namespace pdcsim
