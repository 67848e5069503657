#include "pdcsim/phasematch.hpp"

#include <cmath>
#include <numbers>

namespace pdcsim {

namespace {

// Half-width of sinc^2 at half maximum: sin^2(x)/x^2 = 1/2.
constexpr double kSincHalfMax = 1.3915573782515140;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

void validate(const PhaseMatchSpec& spec) {
  if (spec.angle_deg <= 0.0 || spec.angle_deg >= 90.0)
    throw config_error("phase-matching angle must lie in (0, 90) degrees, got " +
                       std::to_string(spec.angle_deg));
  if (spec.bandwidth_thz <= 0.0)
    throw config_error("phase-matching bandwidth must be positive, got " +
                       std::to_string(spec.bandwidth_thz));
}

double phasematch_amplitude(const PhaseMatchSpec& spec, double nu_s, double nu_i) {
  const double theta = spec.angle_deg * std::numbers::pi / 180.0;
  const double ds = nu_s - spec.signal_center_thz;
  const double di = nu_i - spec.idler_center_thz;
  const double p = -ds * std::sin(theta) + di * std::cos(theta);
  if (spec.profile == PhaseMatchProfile::sinc) {
    // Argument scaled so the intensity FWHM along p equals the bandwidth.
    return sinc(2.0 * kSincHalfMax * p / spec.bandwidth_thz);
  }
  const double x = p / spec.bandwidth_thz;
  return std::exp(-2.0 * std::numbers::ln2 * x * x);
}

Eigen::MatrixXd make_phasematching(const PhaseMatchSpec& spec, const FrequencyGrid& signal_grid,
                                   const FrequencyGrid& idler_grid) {
  validate(spec);
  Eigen::MatrixXd pm(signal_grid.size(), idler_grid.size());
  for (int s = 0; s < signal_grid.size(); ++s)
    for (int i = 0; i < idler_grid.size(); ++i)
      pm(s, i) = phasematch_amplitude(spec, signal_grid.point(s), idler_grid.point(i));
  const double norm = pm.norm();
  if (norm <= 0.0) throw numeric_error("phase-matching function vanishes on the grid");
  return pm / norm;
}

}  // namespace pdcsim
