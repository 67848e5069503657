#include "pdcsim/reconstruction.hpp"

#include <algorithm>
#include <cmath>

namespace pdcsim {

namespace {

Eigen::MatrixXd convolve_same(const Eigen::MatrixXd& image, const Eigen::MatrixXd& kernel) {
  const int hr = static_cast<int>(kernel.rows()) / 2;
  const int hc = static_cast<int>(kernel.cols()) / 2;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(image.rows(), image.cols());
  for (int r = 0; r < image.rows(); ++r)
    for (int c = 0; c < image.cols(); ++c) {
      double acc = 0.0;
      for (int kr = -hr; kr <= hr; ++kr) {
        const int sr = r - kr;
        if (sr < 0 || sr >= image.rows()) continue;
        for (int kc = -hc; kc <= hc; ++kc) {
          const int sc = c - kc;
          if (sc < 0 || sc >= image.cols()) continue;
          acc += kernel(kr + hr, kc + hc) * image(sr, sc);
        }
      }
      out(r, c) = acc;
    }
  return out;
}

}  // namespace

Eigen::MatrixXd richardson_lucy(const Eigen::MatrixXd& blurred, const Eigen::MatrixXd& psf,
                                int iterations, double floor_rel, double stop_tol) {
  if (iterations < 1) throw config_error("Richardson-Lucy needs at least one iteration");
  if (psf.size() == 0 || psf.minCoeff() < 0.0 || psf.sum() <= 0.0)
    throw config_error("Richardson-Lucy psf must be non-negative with positive sum");
  if (psf.rows() % 2 == 0 || psf.cols() % 2 == 0)
    throw config_error("Richardson-Lucy psf dimensions must be odd");
  if (floor_rel <= 0.0) throw config_error("Richardson-Lucy floor must be positive");

  const Eigen::MatrixXd kernel = psf / psf.sum();
  const Eigen::MatrixXd flipped = kernel.reverse();
  const Eigen::MatrixXd data = blurred.cwiseMax(0.0);
  const double floor = floor_rel * std::max(data.maxCoeff(), 1e-300);

  Eigen::MatrixXd u = data;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::MatrixXd estimate = convolve_same(u, kernel).cwiseMax(floor);
    const Eigen::MatrixXd ratio = data.cwiseQuotient(estimate);
    const Eigen::MatrixXd next = u.cwiseProduct(convolve_same(ratio, flipped));
    const double update = (next - u).norm();
    const double scale = u.norm();
    u = next;
    if (stop_tol > 0.0 && scale > 0.0 && update < stop_tol * scale) break;
  }
  return u;
}

JointAmplitude reconstruct_jsa(const Eigen::MatrixXd& jsi, const FrequencyGrid& signal_grid,
                               const FrequencyGrid& idler_grid, const ReconstructionConfig& cfg) {
  if (jsi.rows() != signal_grid.size() || jsi.cols() != idler_grid.size())
    throw config_error("JSI dimensions do not match the frequency grids");

  // Antidiagonal coordinate relative to the grid centers.
  auto u_of = [&](int s, int i) {
    return (signal_grid.point(s) - signal_grid.center()) +
           (idler_grid.point(i) - idler_grid.center());
  };

  double u_offset = 0.0;
  if (cfg.center_policy == ReconstructionConfig::CenterPolicy::jsi_maximum) {
    // Maximum of the JSI; ties broken toward the grid center.
    int bs = 0, bi = 0;
    double best = -1.0;
    double best_dist = 0.0;
    for (int s = 0; s < jsi.rows(); ++s)
      for (int i = 0; i < jsi.cols(); ++i) {
        const double ds = s - 0.5 * (jsi.rows() - 1);
        const double di = i - 0.5 * (jsi.cols() - 1);
        const double dist = ds * ds + di * di;
        if (jsi(s, i) > best || (jsi(s, i) == best && dist < best_dist)) {
          best = jsi(s, i);
          best_dist = dist;
          bs = s;
          bi = i;
        }
      }
    u_offset = u_of(bs, bi);
  }

  if (cfg.phase_source) {
    const FrequencyGrid& pg = cfg.phase_source->grid;
    const double u_lo = u_of(0, 0) - u_offset;
    const double u_hi = u_of(signal_grid.size() - 1, idler_grid.size() - 1) - u_offset;
    if (pg.center() + u_lo < pg.min() || pg.center() + u_hi > pg.max())
      throw config_error("phase source does not cover the antidiagonal range [" +
                         std::to_string(u_lo) + ", " + std::to_string(u_hi) + "] THz");
  }

  Eigen::MatrixXcd f(jsi.rows(), jsi.cols());
  for (int s = 0; s < jsi.rows(); ++s)
    for (int i = 0; i < jsi.cols(); ++i) {
      const double amp = std::sqrt(std::max(0.0, jsi(s, i)));
      double phase = 0.0;
      if (cfg.phase_source) {
        const double u = u_of(s, i) - u_offset;
        phase = std::arg(interpolate(*cfg.phase_source, cfg.phase_source->grid.center() + u));
      }
      f(s, i) = std::polar(amp, phase);
    }

  const double norm = f.norm();
  if (norm <= 0.0) throw numeric_error("reconstructed amplitude vanishes");
  f /= norm;
  return JointAmplitude{signal_grid, idler_grid, std::move(f)};
}

ReconstructionReport analyze_reconstruction(const JointAmplitude& reconstructed, int k_expected,
                                            double epsilon) {
  if (k_expected < 1) throw config_error("k_expected must be >= 1");
  const SchmidtData sd = schmidt_decompose(reconstructed, epsilon);

  ReconstructionReport report;
  report.schmidt_number = sd.schmidt_number;
  report.weights = sd.weights;

  const int keep = std::min(k_expected, sd.schmidt_rank);
  report.pruned_schmidt_number = prune_spurious_modes(sd, keep).schmidt_number;

  const double target = 1.0 / k_expected;
  double flat = 0.0;
  for (int k = 0; k < k_expected; ++k) {
    const double w = k < sd.weights.size() ? sd.weights(k) : 0.0;
    flat = std::max(flat, std::abs(w - target));
  }
  report.flatness = flat;
  return report;
}

}  // namespace pdcsim
