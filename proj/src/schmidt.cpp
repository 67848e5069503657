#include "pdcsim/schmidt.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace pdcsim {

double schmidt_number_from_weights(const Eigen::VectorXd& weights) {
  const double sum = weights.sum();
  const double sum_sq = weights.squaredNorm();
  if (sum_sq <= 0.0) throw numeric_error("Schmidt weights are all zero");
  return sum * sum / sum_sq;
}

namespace {

SchmidtData from_svd(const Eigen::VectorXd& singular_values, Eigen::MatrixXcd u,
                     Eigen::MatrixXcd v, double epsilon) {
  SchmidtData sd;
  sd.coefficients = singular_values;
  sd.weights = singular_values.array().square();
  const double total = sd.weights.sum();
  if (total <= 0.0) throw numeric_error("Schmidt decomposition produced zero weights");
  sd.weights /= total;
  sd.coefficients = sd.weights.array().sqrt();
  sd.signal_modes = std::move(u);
  sd.idler_modes = std::move(v);
  sd.schmidt_number = schmidt_number_from_weights(sd.weights);
  sd.schmidt_rank = 0;
  const double cutoff = epsilon * sd.weights(0);
  for (int k = 0; k < sd.weights.size(); ++k)
    if (sd.weights(k) > cutoff) ++sd.schmidt_rank;
  return sd;
}

}  // namespace

SchmidtData schmidt_decompose(const JointAmplitude& jsa, double epsilon) {
  if (epsilon <= 0.0) throw config_error("rank threshold must be positive");
  const Eigen::MatrixXcd& f = jsa.values;

  // Real fast path: CK pumps and real phase matching give a real JSA, where
  // the real-valued solver is about 3x faster.
  const double imag_max = f.imag().cwiseAbs().maxCoeff();
  const double abs_max = f.cwiseAbs().maxCoeff();
  if (imag_max <= 1e-14 * abs_max) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(f.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw numeric_error("SVD did not converge");
    return from_svd(svd.singularValues(), svd.matrixU().cast<std::complex<double>>(),
                    svd.matrixV().cast<std::complex<double>>(), epsilon);
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw numeric_error("SVD did not converge");
  // f = U S V^T in Schmidt form: idler modes are the conjugated V columns.
  return from_svd(svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate(), epsilon);
}

SchmidtData prune_spurious_modes(const SchmidtData& sd, int keep) {
  if (keep < 1) throw config_error("prune: keep must be >= 1");
  if (keep > sd.schmidt_rank)
    throw config_error("prune: keep " + std::to_string(keep) + " exceeds Schmidt rank " +
                       std::to_string(sd.schmidt_rank));
  SchmidtData out;
  out.weights = sd.weights.head(keep);
  out.weights /= out.weights.sum();
  out.coefficients = out.weights.array().sqrt();
  out.signal_modes = sd.signal_modes.leftCols(keep);
  out.idler_modes = sd.idler_modes.leftCols(keep);
  out.schmidt_number = schmidt_number_from_weights(out.weights);
  const double cutoff = 1e-6 * out.weights(0);
  out.schmidt_rank = 0;
  for (int k = 0; k < keep; ++k)
    if (out.weights(k) > cutoff) ++out.schmidt_rank;
  return out;
}

}  // namespace pdcsim
