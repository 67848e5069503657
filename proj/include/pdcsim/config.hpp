#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdcsim/jsa.hpp"
#include "pdcsim/measurement.hpp"

namespace pdcsim {

// Flat `section.key = value` plain-text configuration with units in the key
// names. Wavelengths (nm) are converted to THz exactly once, at load; all
// internal math is in THz/ps.
struct ExperimentConfig {
  // source geometry
  double lambda_p_nm = 758.7;
  double lambda_s_nm = 1511.0;
  double lambda_i_nm = 1524.0;
  PhaseMatchProfile pm_profile = PhaseMatchProfile::sinc;
  double pm_angle_deg = 31.0;
  double pm_bandwidth_thz = 1.0;

  // pump
  PumpShape pump_shape = PumpShape::gaussian;
  int pump_order = 0;
  double pump_fwhm_thz = 1.3;
  double pump_chirp_ps2 = 0.0;
  double pump_bin_separation_ps = 0.0;  // 0 = auto: 3 / pm_bandwidth_thz
  std::vector<double> pump_bin_weights;
  double pump_shaper_resolution_thz = 0.0;

  // spectral filters
  bool filter_enabled = true;
  FilterProfile filter_profile = FilterProfile::rectangular;
  double filter_signal_fwhm_nm = 7.0;
  double filter_idler_fwhm_nm = 7.0;
  int filter_supergauss_order = 2;

  // grids
  int grid_points = 512;
  double grid_span_thz = 0.0;  // 0 = auto: 6 x max(pump fwhm, pm bandwidth)

  // ToF spectrograph
  double tof_dispersion_ps_per_nm = -418.0;
  int tof_psf_size = 15;
  double tof_psf_fwhm_bins = 5.0;
  double tof_total_counts = 1e6;
  std::uint64_t tof_seed = 1;

  // photon statistics
  double g2_gain = 0.05;
  double g2_loss_signal = 0.25;
  double g2_loss_idler = 0.25;
  long g2_pulses = 1000000;
  double g2_background_rate = 0.0;
  std::uint64_t g2_seed = 1;

  std::string output_dir = ".";

  std::vector<std::string> warnings;  // filled at load (energy consistency)

  // derived quantities
  double pump_center_thz() const { return wavelength_to_frequency(lambda_p_nm); }
  double signal_center_thz() const { return wavelength_to_frequency(lambda_s_nm); }
  double idler_center_thz() const { return wavelength_to_frequency(lambda_i_nm); }
  double auto_span_thz() const;
  double bin_separation_ps() const;

  FrequencyGrid signal_grid() const;
  FrequencyGrid idler_grid() const;
  FrequencyGrid pump_grid() const;

  PumpSpec pump_spec() const;
  PhaseMatchSpec phasematch_spec() const;
  FilterSpec signal_filter() const;
  FilterSpec idler_filter() const;
  ToFSpec tof_spec() const;
  GainSpec gain_spec() const;
};

std::string to_string(PumpShape shape);
std::string to_string(PhaseMatchProfile profile);
std::string to_string(FilterProfile profile);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);  // throws config_error naming the key

}  // namespace pdcsim
