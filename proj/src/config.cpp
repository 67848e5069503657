#include "pdcsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pdcsim/matrix_io.hpp"

namespace pdcsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error(key + ": cannot parse '" + value + "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error(key + ": cannot parse '" + value + "' as an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error(key + ": cannot parse '" + value + "' as an unsigned integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw config_error(key + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_weight_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

PumpShape parse_pump_shape(const std::string& value) {
  if (value == "gaussian") return PumpShape::gaussian;
  if (value == "hermite_gauss") return PumpShape::hermite_gauss;
  if (value == "cosine_kernel") return PumpShape::cosine_kernel;
  if (value == "weighted_timebins") return PumpShape::weighted_timebins;
  throw config_error("pump.shape: unknown shape '" + value + "'");
}

PhaseMatchProfile parse_pm_profile(const std::string& value) {
  if (value == "sinc") return PhaseMatchProfile::sinc;
  if (value == "gaussian") return PhaseMatchProfile::gaussian;
  throw config_error("pm.profile: unknown profile '" + value + "'");
}

FilterProfile parse_filter_profile(const std::string& value) {
  if (value == "rectangular") return FilterProfile::rectangular;
  if (value == "gaussian") return FilterProfile::gaussian;
  if (value == "supergaussian") return FilterProfile::supergaussian;
  throw config_error("filter.profile: unknown profile '" + value + "'");
}

// Filter FWHM is quoted in nm around the arm's central wavelength; the
// equivalent THz width uses d(nu) = c * d(lambda) / lambda^2.
double nm_bandwidth_to_thz(double fwhm_nm, double lambda_nm) {
  return kSpeedOfLight * fwhm_nm / (lambda_nm * lambda_nm);
}

}  // namespace

std::string to_string(PumpShape shape) {
  switch (shape) {
    case PumpShape::gaussian: return "gaussian";
    case PumpShape::hermite_gauss: return "hermite_gauss";
    case PumpShape::cosine_kernel: return "cosine_kernel";
    case PumpShape::weighted_timebins: return "weighted_timebins";
  }
  return "?";
}

std::string to_string(PhaseMatchProfile profile) {
  return profile == PhaseMatchProfile::sinc ? "sinc" : "gaussian";
}

std::string to_string(FilterProfile profile) {
  switch (profile) {
    case FilterProfile::rectangular: return "rectangular";
    case FilterProfile::gaussian: return "gaussian";
    case FilterProfile::supergaussian: return "supergaussian";
  }
  return "?";
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "source.lambda_p_nm") cfg.lambda_p_nm = parse_double(key, value);
    else if (key == "source.lambda_s_nm") cfg.lambda_s_nm = parse_double(key, value);
    else if (key == "source.lambda_i_nm") cfg.lambda_i_nm = parse_double(key, value);
    else if (key == "pm.profile") cfg.pm_profile = parse_pm_profile(value);
    else if (key == "pm.angle_deg") cfg.pm_angle_deg = parse_double(key, value);
    else if (key == "pm.bandwidth_thz") cfg.pm_bandwidth_thz = parse_double(key, value);
    else if (key == "pump.shape") cfg.pump_shape = parse_pump_shape(value);
    else if (key == "pump.order") cfg.pump_order = static_cast<int>(parse_long(key, value));
    else if (key == "pump.fwhm_thz") cfg.pump_fwhm_thz = parse_double(key, value);
    else if (key == "pump.chirp_ps2") cfg.pump_chirp_ps2 = parse_double(key, value);
    else if (key == "pump.bin_separation_ps") cfg.pump_bin_separation_ps = parse_double(key, value);
    else if (key == "pump.bin_weights") cfg.pump_bin_weights = parse_weight_list(key, value);
    else if (key == "pump.shaper_resolution_thz") cfg.pump_shaper_resolution_thz = parse_double(key, value);
    else if (key == "filter.enabled") cfg.filter_enabled = parse_bool(key, value);
    else if (key == "filter.profile") cfg.filter_profile = parse_filter_profile(value);
    else if (key == "filter.signal_fwhm_nm") cfg.filter_signal_fwhm_nm = parse_double(key, value);
    else if (key == "filter.idler_fwhm_nm") cfg.filter_idler_fwhm_nm = parse_double(key, value);
    else if (key == "filter.supergauss_order") cfg.filter_supergauss_order = static_cast<int>(parse_long(key, value));
    else if (key == "grid.points") cfg.grid_points = static_cast<int>(parse_long(key, value));
    else if (key == "grid.span_thz") cfg.grid_span_thz = parse_double(key, value);
    else if (key == "tof.dispersion_ps_per_nm") cfg.tof_dispersion_ps_per_nm = parse_double(key, value);
    else if (key == "tof.psf_size") cfg.tof_psf_size = static_cast<int>(parse_long(key, value));
    else if (key == "tof.psf_fwhm_bins") cfg.tof_psf_fwhm_bins = parse_double(key, value);
    else if (key == "tof.total_counts") cfg.tof_total_counts = parse_double(key, value);
    else if (key == "tof.seed") cfg.tof_seed = parse_u64(key, value);
    else if (key == "g2.gain") cfg.g2_gain = parse_double(key, value);
    else if (key == "g2.loss_signal") cfg.g2_loss_signal = parse_double(key, value);
    else if (key == "g2.loss_idler") cfg.g2_loss_idler = parse_double(key, value);
    else if (key == "g2.pulses") cfg.g2_pulses = parse_long(key, value);
    else if (key == "g2.background_rate") cfg.g2_background_rate = parse_double(key, value);
    else if (key == "g2.seed") cfg.g2_seed = parse_u64(key, value);
    else if (key == "output.dir") cfg.output_dir = value;
    else throw config_error("unknown config key '" + key + "'");
  }

  validate(cfg);

  // Energy conservation between the central wavelengths is a consistency
  // check, not an error: the pump envelope simply sits off-center otherwise.
  const double lhs = 1.0 / cfg.lambda_p_nm;
  const double rhs = 1.0 / cfg.lambda_s_nm + 1.0 / cfg.lambda_i_nm;
  if (std::abs(lhs - rhs) > 1e-3 * lhs)
    cfg.warnings.push_back("energy mismatch: 1/lambda_p differs from 1/lambda_s + 1/lambda_i by " +
                           std::to_string(std::abs(lhs - rhs) / lhs * 100.0) + "%");
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path.string());
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto d = [](double v) { return format_double(v); };
  out << "source.lambda_p_nm = " << d(cfg.lambda_p_nm) << "\n";
  out << "source.lambda_s_nm = " << d(cfg.lambda_s_nm) << "\n";
  out << "source.lambda_i_nm = " << d(cfg.lambda_i_nm) << "\n";
  out << "pm.profile = " << to_string(cfg.pm_profile) << "\n";
  out << "pm.angle_deg = " << d(cfg.pm_angle_deg) << "\n";
  out << "pm.bandwidth_thz = " << d(cfg.pm_bandwidth_thz) << "\n";
  out << "pump.shape = " << to_string(cfg.pump_shape) << "\n";
  out << "pump.order = " << cfg.pump_order << "\n";
  out << "pump.fwhm_thz = " << d(cfg.pump_fwhm_thz) << "\n";
  out << "pump.chirp_ps2 = " << d(cfg.pump_chirp_ps2) << "\n";
  out << "pump.bin_separation_ps = " << d(cfg.pump_bin_separation_ps) << "\n";
  out << "pump.bin_weights = ";
  for (std::size_t k = 0; k < cfg.pump_bin_weights.size(); ++k)
    out << (k ? "," : "") << d(cfg.pump_bin_weights[k]);
  out << "\n";
  out << "pump.shaper_resolution_thz = " << d(cfg.pump_shaper_resolution_thz) << "\n";
  out << "filter.enabled = " << (cfg.filter_enabled ? "true" : "false") << "\n";
  out << "filter.profile = " << to_string(cfg.filter_profile) << "\n";
  out << "filter.signal_fwhm_nm = " << d(cfg.filter_signal_fwhm_nm) << "\n";
  out << "filter.idler_fwhm_nm = " << d(cfg.filter_idler_fwhm_nm) << "\n";
  out << "filter.supergauss_order = " << cfg.filter_supergauss_order << "\n";
  out << "grid.points = " << cfg.grid_points << "\n";
  out << "grid.span_thz = " << d(cfg.grid_span_thz) << "\n";
  out << "tof.dispersion_ps_per_nm = " << d(cfg.tof_dispersion_ps_per_nm) << "\n";
  out << "tof.psf_size = " << cfg.tof_psf_size << "\n";
  out << "tof.psf_fwhm_bins = " << d(cfg.tof_psf_fwhm_bins) << "\n";
  out << "tof.total_counts = " << d(cfg.tof_total_counts) << "\n";
  out << "tof.seed = " << cfg.tof_seed << "\n";
  out << "g2.gain = " << d(cfg.g2_gain) << "\n";
  out << "g2.loss_signal = " << d(cfg.g2_loss_signal) << "\n";
  out << "g2.loss_idler = " << d(cfg.g2_loss_idler) << "\n";
  out << "g2.pulses = " << cfg.g2_pulses << "\n";
  out << "g2.background_rate = " << d(cfg.g2_background_rate) << "\n";
  out << "g2.seed = " << cfg.g2_seed << "\n";
  out << "output.dir = " << cfg.output_dir << "\n";
  return out.str();
}

void validate(const ExperimentConfig& cfg) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw config_error(msg);
  };
  require(cfg.lambda_p_nm > 0.0, "source.lambda_p_nm must be positive");
  require(cfg.lambda_s_nm > 0.0, "source.lambda_s_nm must be positive");
  require(cfg.lambda_i_nm > 0.0, "source.lambda_i_nm must be positive");
  require(cfg.pm_angle_deg > 0.0 && cfg.pm_angle_deg < 90.0, "pm.angle_deg must lie in (0, 90)");
  require(cfg.pm_bandwidth_thz > 0.0, "pm.bandwidth_thz must be positive");
  require(cfg.pump_fwhm_thz > 0.0, "pump.fwhm_thz must be positive");
  require(cfg.pump_order >= 0, "pump.order must be non-negative");
  require(cfg.pump_bin_separation_ps >= 0.0, "pump.bin_separation_ps must be non-negative");
  require(cfg.pump_shaper_resolution_thz >= 0.0, "pump.shaper_resolution_thz must be non-negative");
  require(cfg.filter_signal_fwhm_nm > 0.0, "filter.signal_fwhm_nm must be positive");
  require(cfg.filter_idler_fwhm_nm > 0.0, "filter.idler_fwhm_nm must be positive");
  require(cfg.filter_supergauss_order >= 1, "filter.supergauss_order must be >= 1");
  require(cfg.grid_points >= 2, "grid.points must be >= 2");
  require(cfg.grid_span_thz >= 0.0, "grid.span_thz must be non-negative");
  require(cfg.tof_psf_size >= 1 && cfg.tof_psf_size % 2 == 1, "tof.psf_size must be odd and positive");
  require(cfg.tof_psf_fwhm_bins > 0.0, "tof.psf_fwhm_bins must be positive");
  require(cfg.tof_total_counts > 0.0, "tof.total_counts must be positive");
  require(cfg.g2_gain > 0.0, "g2.gain must be positive");
  require(cfg.g2_loss_signal >= 0.0 && cfg.g2_loss_signal <= 1.0, "g2.loss_signal must lie in [0, 1]");
  require(cfg.g2_loss_idler >= 0.0 && cfg.g2_loss_idler <= 1.0, "g2.loss_idler must lie in [0, 1]");
  require(cfg.g2_pulses >= 1, "g2.pulses must be >= 1");
  require(cfg.g2_background_rate >= 0.0, "g2.background_rate must be non-negative");
}

double ExperimentConfig::auto_span_thz() const {
  if (grid_span_thz > 0.0) return grid_span_thz;
  return 6.0 * std::max(pump_fwhm_thz, pm_bandwidth_thz);
}

double ExperimentConfig::bin_separation_ps() const {
  if (pump_bin_separation_ps > 0.0) return pump_bin_separation_ps;
  // Default keeps time bins well separated from the phase-matching
  // correlation time, which the maximal-entanglement regime requires.
  return 3.0 / pm_bandwidth_thz;
}

FrequencyGrid ExperimentConfig::signal_grid() const {
  return FrequencyGrid(grid_points, signal_center_thz(), auto_span_thz());
}

FrequencyGrid ExperimentConfig::idler_grid() const {
  return FrequencyGrid(grid_points, idler_center_thz(), auto_span_thz());
}

FrequencyGrid ExperimentConfig::pump_grid() const {
  // Covers the full antidiagonal range of the 2D grids with spacing about
  // half of theirs.
  return FrequencyGrid(4 * grid_points + 1, pump_center_thz(), 2.05 * auto_span_thz());
}

PumpSpec ExperimentConfig::pump_spec() const {
  PumpSpec spec;
  spec.shape = pump_shape;
  spec.order = pump_order;
  spec.center_thz = pump_center_thz();
  spec.fwhm_thz = pump_fwhm_thz;
  spec.chirp_ps2 = pump_chirp_ps2;
  spec.bin_separation_ps = bin_separation_ps();
  spec.bin_weights = pump_bin_weights;
  spec.shaper_resolution_thz = pump_shaper_resolution_thz;
  return spec;
}

PhaseMatchSpec ExperimentConfig::phasematch_spec() const {
  PhaseMatchSpec spec;
  spec.profile = pm_profile;
  spec.angle_deg = pm_angle_deg;
  spec.bandwidth_thz = pm_bandwidth_thz;
  spec.signal_center_thz = signal_center_thz();
  spec.idler_center_thz = idler_center_thz();
  return spec;
}

FilterSpec ExperimentConfig::signal_filter() const {
  return FilterSpec{signal_center_thz(), nm_bandwidth_to_thz(filter_signal_fwhm_nm, lambda_s_nm),
                    filter_profile, filter_supergauss_order};
}

FilterSpec ExperimentConfig::idler_filter() const {
  return FilterSpec{idler_center_thz(), nm_bandwidth_to_thz(filter_idler_fwhm_nm, lambda_i_nm),
                    filter_profile, filter_supergauss_order};
}

ToFSpec ExperimentConfig::tof_spec() const {
  ToFSpec spec;
  spec.dispersion_ps_per_nm = tof_dispersion_ps_per_nm;
  spec.psf = make_gaussian_psf(tof_psf_size, tof_psf_fwhm_bins);
  spec.total_counts = tof_total_counts;
  spec.seed = tof_seed;
  return spec;
}

GainSpec ExperimentConfig::gain_spec() const {
  GainSpec spec;
  spec.gain = g2_gain;
  spec.loss_signal = g2_loss_signal;
  spec.loss_idler = g2_loss_idler;
  spec.pulses = g2_pulses;
  spec.background_rate = g2_background_rate;
  spec.seed = g2_seed;
  return spec;
}

}  // namespace pdcsim
