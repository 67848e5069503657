#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdcsim/jsa.hpp"
#include "pdcsim/schmidt.hpp"

namespace pdcsim {

// Time-of-flight spectrograph model: chromatic dispersion maps wavelength to
// delay, the measured point-spread function blurs the delay-space image.
struct ToFSpec {
  double dispersion_ps_per_nm = -418.0;
  Eigen::MatrixXd psf;  // odd dims, entries >= 0, sum 1
  double total_counts = 1e6;
  std::uint64_t seed = 1;
};

Eigen::MatrixXd make_gaussian_psf(int size, double fwhm_bins);

// Delay-space image before shot noise: unit-sum intensity on uniform delay
// grids derived from the JSA frequency grids.
struct BlurredJsi {
  std::vector<double> signal_delays_ps;
  std::vector<double> idler_delays_ps;
  Eigen::MatrixXd intensity;
};

BlurredJsi tof_blurred_intensity(const JointAmplitude& jsa, const ToFSpec& tof);

struct JsiRecord {
  std::vector<double> signal_delays_ps;
  std::vector<double> idler_delays_ps;
  Eigen::MatrixXd counts;  // integer-valued Poisson draws
  double signal_center_thz = 0.0;
  double idler_center_thz = 0.0;
  double dispersion_ps_per_nm = 0.0;
  double total_counts = 0.0;
  std::uint64_t seed = 0;
};

JsiRecord simulate_tof_jsi(const JointAmplitude& jsa, const ToFSpec& tof);

// Map a delay-space intensity matrix back onto frequency grids using the
// record's dispersion metadata (bilinear interpolation with the Jacobian of
// the delay->frequency change of variables). Output is non-negative and
// unnormalized.
Eigen::MatrixXd delay_to_frequency(const Eigen::MatrixXd& delay_image,
                                   const JsiRecord& record,
                                   const FrequencyGrid& signal_grid,
                                   const FrequencyGrid& idler_grid);

// Multimode squeezing proxy: each Schmidt mode is an independent thermal
// source with mean sinh^2(gain * sqrt(lambda_k)).
struct GainSpec {
  double gain = 0.05;
  double loss_signal = 1.0;
  double loss_idler = 1.0;
  long pulses = 1000000;
  double background_rate = 0.0;  // mean background counts per pulse per arm
  std::uint64_t seed = 1;
};

struct G2Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double mean_photons = 0.0;
  long pulses = 0;
};

// Unheralded g2 = <n(n-1)>/<n>^2 of the signal arm from per-pulse photon
// numbers; stderr from jackknife over pulse batches.
G2Estimate simulate_g2(const SchmidtData& sd, const GainSpec& gain);

struct KlyshkoEstimate {
  double signal = 0.0;  // eta_s = p_coinc / p_idler
  double idler = 0.0;   // eta_i = p_coinc / p_signal
};

KlyshkoEstimate klyshko(const GainSpec& gain, long pulses);

// Gaussian-pump decorrelation scan over pump FWHM and chirp correction.
struct ScanGeometry {
  PumpSpec pump;  // baseline; pump.chirp_ps2 acts as the setup-injected chirp
  PhaseMatchSpec pm;
  std::optional<FilterSpec> signal_filter;
  std::optional<FilterSpec> idler_filter;
  int grid_points = 257;
  double grid_span_thz = 0.0;  // 0 = auto: 6 x max(fwhm, pm bandwidth)
};

struct ScanPoint {
  double fwhm_thz;
  double chirp_ps2;  // chirp correction added on top of the baseline chirp
  double schmidt_number;
  double g2;
};

struct DecorrelationScan {
  std::vector<ScanPoint> points;
  std::size_t best = 0;  // argmin of K
};

DecorrelationScan decorrelation_scan(const std::vector<double>& fwhm_values_thz,
                                     const std::vector<double>& chirp_values_ps2,
                                     const ScanGeometry& geometry);

}  // namespace pdcsim
