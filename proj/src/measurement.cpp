#include "pdcsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace pdcsim {

namespace {

void validate_psf(const Eigen::MatrixXd& psf) {
  if (psf.size() == 0 || psf.rows() % 2 == 0 || psf.cols() % 2 == 0)
    throw config_error("psf dimensions must be odd, got " + std::to_string(psf.rows()) + "x" +
                       std::to_string(psf.cols()));
  if (psf.minCoeff() < 0.0) throw config_error("psf entries must be non-negative");
  if (std::abs(psf.sum() - 1.0) > 1e-9)
    throw config_error("psf must sum to 1, got " + std::to_string(psf.sum()));
}

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

double delay_of_frequency(double nu_thz, double center_thz, double dispersion) {
  return dispersion * (frequency_to_wavelength(nu_thz) - frequency_to_wavelength(center_thz));
}

// |d nu / d t| at a given frequency.
double frequency_per_delay(double nu_thz, double dispersion) {
  const double lambda = frequency_to_wavelength(nu_thz);
  return kSpeedOfLight / (lambda * lambda * std::abs(dispersion));
}

double bilinear(const Eigen::MatrixXd& m, double r, double c) {
  if (r < 0.0 || c < 0.0 || r > m.rows() - 1 || c > m.cols() - 1) return 0.0;
  const int r0 = std::min(static_cast<int>(r), static_cast<int>(m.rows()) - 2);
  const int c0 = std::min(static_cast<int>(c), static_cast<int>(m.cols()) - 2);
  const double fr = r - r0, fc = c - c0;
  return m(r0, c0) * (1 - fr) * (1 - fc) + m(r0 + 1, c0) * fr * (1 - fc) +
         m(r0, c0 + 1) * (1 - fr) * fc + m(r0 + 1, c0 + 1) * fr * fc;
}

}  // namespace

Eigen::MatrixXd make_gaussian_psf(int size, double fwhm_bins) {
  if (size < 1 || size % 2 == 0) throw config_error("psf size must be odd and positive");
  if (fwhm_bins <= 0.0) throw config_error("psf fwhm must be positive");
  const double sigma = fwhm_bins / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  Eigen::MatrixXd psf(size, size);
  const int h = size / 2;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double dr = r - h, dc = c - h;
      psf(r, c) = std::exp(-0.5 * (dr * dr + dc * dc) / (sigma * sigma));
    }
  return psf / psf.sum();
}

BlurredJsi tof_blurred_intensity(const JointAmplitude& jsa, const ToFSpec& tof) {
  validate_psf(tof.psf);
  if (tof.dispersion_ps_per_nm == 0.0) throw config_error("ToF dispersion must be nonzero");
  if (jsa.signal_grid.min() <= 0.0 || jsa.idler_grid.min() <= 0.0)
    throw config_error("ToF simulation needs absolute (positive) optical frequencies");

  const Eigen::MatrixXd jsi = jsa.values.cwiseAbs2();
  const double d = tof.dispersion_ps_per_nm;

  auto delay_axis = [&](const FrequencyGrid& g) {
    const double t0 = delay_of_frequency(g.min(), g.center(), d);
    const double t1 = delay_of_frequency(g.max(), g.center(), d);
    std::vector<double> axis(g.size());
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    for (int k = 0; k < g.size(); ++k)
      axis[k] = lo + (hi - lo) * static_cast<double>(k) / (g.size() - 1);
    return axis;
  };

  BlurredJsi out;
  out.signal_delays_ps = delay_axis(jsa.signal_grid);
  out.idler_delays_ps = delay_axis(jsa.idler_grid);

  // Resample the frequency-space JSI onto the uniform delay grids; the
  // Jacobian keeps the intensity a proper density under t = D*(lambda - lambda0).
  auto freq_of_delay = [&](double t, const FrequencyGrid& g) {
    const double lambda = frequency_to_wavelength(g.center()) + t / d;
    return kSpeedOfLight / lambda;
  };

  const int ns = jsa.signal_grid.size(), ni = jsa.idler_grid.size();
  out.intensity.resize(ns, ni);
  for (int j = 0; j < ns; ++j) {
    const double nus = freq_of_delay(out.signal_delays_ps[j], jsa.signal_grid);
    const double rs = (nus - jsa.signal_grid.min()) / jsa.signal_grid.spacing();
    const double js = frequency_per_delay(nus, d);
    for (int k = 0; k < ni; ++k) {
      const double nui = freq_of_delay(out.idler_delays_ps[k], jsa.idler_grid);
      const double ri = (nui - jsa.idler_grid.min()) / jsa.idler_grid.spacing();
      out.intensity(j, k) = bilinear(jsi, rs, ri) * js * frequency_per_delay(nui, d);
    }
  }

  out.intensity = convolve_same(out.intensity, tof.psf);
  const double total = out.intensity.sum();
  if (total <= 0.0) throw numeric_error("ToF image has no intensity on the delay grid");
  out.intensity /= total;
  return out;
}

JsiRecord simulate_tof_jsi(const JointAmplitude& jsa, const ToFSpec& tof) {
  if (tof.total_counts <= 0.0) throw config_error("ToF total_counts must be positive");
  BlurredJsi blurred = tof_blurred_intensity(jsa, tof);

  std::mt19937_64 rng(tof.seed);
  JsiRecord rec;
  rec.signal_delays_ps = std::move(blurred.signal_delays_ps);
  rec.idler_delays_ps = std::move(blurred.idler_delays_ps);
  rec.signal_center_thz = jsa.signal_grid.center();
  rec.idler_center_thz = jsa.idler_grid.center();
  rec.dispersion_ps_per_nm = tof.dispersion_ps_per_nm;
  rec.total_counts = tof.total_counts;
  rec.seed = tof.seed;
  rec.counts.resize(blurred.intensity.rows(), blurred.intensity.cols());
  for (int r = 0; r < rec.counts.rows(); ++r)
    for (int c = 0; c < rec.counts.cols(); ++c) {
      const double mean = tof.total_counts * blurred.intensity(r, c);
      rec.counts(r, c) = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long>(mean)(rng)) : 0.0;
    }
  return rec;
}

Eigen::MatrixXd delay_to_frequency(const Eigen::MatrixXd& delay_image, const JsiRecord& record,
                                   const FrequencyGrid& signal_grid, const FrequencyGrid& idler_grid) {
  if (delay_image.rows() != static_cast<Eigen::Index>(record.signal_delays_ps.size()) ||
      delay_image.cols() != static_cast<Eigen::Index>(record.idler_delays_ps.size()))
    throw config_error("delay image dimensions do not match the record delay grids");

  const double d = record.dispersion_ps_per_nm;
  auto axis_pos = [](const std::vector<double>& axis, double t) {
    const double dt = axis[1] - axis[0];
    return (t - axis.front()) / dt;
  };

  Eigen::MatrixXd out(signal_grid.size(), idler_grid.size());
  for (int s = 0; s < signal_grid.size(); ++s) {
    const double nus = signal_grid.point(s);
    const double ts = d * (frequency_to_wavelength(nus) - frequency_to_wavelength(record.signal_center_thz));
    const double rs = axis_pos(record.signal_delays_ps, ts);
    const double js = 1.0 / frequency_per_delay(nus, d);
    for (int i = 0; i < idler_grid.size(); ++i) {
      const double nui = idler_grid.point(i);
      const double ti = d * (frequency_to_wavelength(nui) - frequency_to_wavelength(record.idler_center_thz));
      const double ri = axis_pos(record.idler_delays_ps, ti);
      out(s, i) = std::max(0.0, bilinear(delay_image, rs, ri) * js / frequency_per_delay(nui, d));
    }
  }
  return out;
}

G2Estimate simulate_g2(const SchmidtData& sd, const GainSpec& gain) {
  if (gain.pulses < 1) throw config_error("g2 simulation needs at least one pulse");
  if (gain.gain <= 0.0) throw config_error("gain must be positive");
  if (gain.loss_signal < 0.0 || gain.loss_signal > 1.0)
    throw config_error("loss_signal must lie in [0, 1]");
  if (gain.background_rate < 0.0) throw config_error("background rate must be non-negative");

  // Per-mode thermal means; modes with negligible weight cannot fire.
  std::vector<std::geometric_distribution<long>> modes;
  const double w0 = sd.weights(0);
  for (int k = 0; k < sd.weights.size(); ++k) {
    if (sd.weights(k) < 1e-12 * w0) continue;
    const double mu = std::pow(std::sinh(gain.gain * std::sqrt(sd.weights(k))), 2);
    modes.emplace_back(1.0 / (1.0 + mu));
  }

  std::mt19937_64 rng(gain.seed);
  std::poisson_distribution<long> background(gain.background_rate);
  std::binomial_distribution<long> loss;
  const bool lossy = gain.loss_signal < 1.0;

  const int batches = static_cast<int>(std::min<long>(20, gain.pulses));
  std::vector<double> s1(batches, 0.0), s2(batches, 0.0);
  std::vector<long> counts(batches, 0);
  for (long p = 0; p < gain.pulses; ++p) {
    long n = 0;
    for (auto& mode : modes) n += mode(rng);
    if (lossy && n > 0)
      n = loss(rng, std::binomial_distribution<long>::param_type(n, gain.loss_signal));
    if (gain.background_rate > 0.0) n += background(rng);
    const int b = static_cast<int>(p % batches);
    s1[b] += n;
    s2[b] += static_cast<double>(n) * (n - 1);
    ++counts[b];
  }

  const double t1 = std::accumulate(s1.begin(), s1.end(), 0.0);
  const double t2 = std::accumulate(s2.begin(), s2.end(), 0.0);
  const double np = static_cast<double>(gain.pulses);
  if (t1 <= 0.0) throw numeric_error("g2 simulation detected no photons");

  G2Estimate est;
  est.value = np * t2 / (t1 * t1);
  est.mean_photons = t1 / np;
  est.pulses = gain.pulses;

  // Jackknife over batches.
  std::vector<double> loo(batches);
  double loo_mean = 0.0;
  for (int b = 0; b < batches; ++b) {
    const double n1 = t1 - s1[b], n2 = t2 - s2[b];
    const double nn = np - counts[b];
    loo[b] = n1 > 0.0 ? nn * n2 / (n1 * n1) : est.value;
    loo_mean += loo[b];
  }
  loo_mean /= batches;
  double var = 0.0;
  for (double v : loo) var += (v - loo_mean) * (v - loo_mean);
  est.stderr_ = std::sqrt(var * (batches - 1) / batches);
  return est;
}

KlyshkoEstimate klyshko(const GainSpec& gain, long pulses) {
  if (pulses < 1) throw config_error("Klyshko estimation needs at least one pulse");
  const double mu = std::pow(std::sinh(gain.gain), 2);
  std::mt19937_64 rng(gain.seed);
  std::geometric_distribution<long> pairs(1.0 / (1.0 + mu));
  std::binomial_distribution<long> thin;
  std::poisson_distribution<long> background(gain.background_rate);
  using Param = std::binomial_distribution<long>::param_type;

  long n_signal = 0, n_idler = 0, n_coinc = 0;
  for (long p = 0; p < pulses; ++p) {
    const long m = pairs(rng);
    long s = m > 0 ? thin(rng, Param(m, gain.loss_signal)) : 0;
    long i = m > 0 ? thin(rng, Param(m, gain.loss_idler)) : 0;
    if (gain.background_rate > 0.0) {
      s += background(rng);
      i += background(rng);
    }
    const bool cs = s > 0, ci = i > 0;
    n_signal += cs;
    n_idler += ci;
    n_coinc += cs && ci;
  }

  KlyshkoEstimate est;
  est.signal = n_idler > 0 ? static_cast<double>(n_coinc) / n_idler : 0.0;
  est.idler = n_signal > 0 ? static_cast<double>(n_coinc) / n_signal : 0.0;
  return est;
}

DecorrelationScan decorrelation_scan(const std::vector<double>& fwhm_values_thz,
                                     const std::vector<double>& chirp_values_ps2,
                                     const ScanGeometry& geometry) {
  if (fwhm_values_thz.empty() || chirp_values_ps2.empty())
    throw config_error("decorrelation scan ranges must be non-empty");
  validate(geometry.pm);

  DecorrelationScan scan;
  double best_k = std::numeric_limits<double>::infinity();
  for (double fwhm : fwhm_values_thz) {
    for (double chirp : chirp_values_ps2) {
      PumpSpec pump = geometry.pump;
      pump.shape = PumpShape::gaussian;
      pump.fwhm_thz = fwhm;
      pump.chirp_ps2 = geometry.pump.chirp_ps2 + chirp;

      const double span = geometry.grid_span_thz > 0.0
                              ? geometry.grid_span_thz
                              : 6.0 * std::max(fwhm, geometry.pm.bandwidth_thz);
      FrequencyGrid sg(geometry.grid_points, geometry.pm.signal_center_thz, span);
      FrequencyGrid ig(geometry.grid_points, geometry.pm.idler_center_thz, span);
      FrequencyGrid pg(2 * geometry.grid_points + 1, pump.center_thz, 2.04 * span);

      JointAmplitude jsa = build_jsa(make_pump(pump, pg), geometry.pm, sg, ig);
      if (geometry.signal_filter && geometry.idler_filter)
        jsa = apply_filters(jsa, *geometry.signal_filter, *geometry.idler_filter).jsa;

      const double k = schmidt_decompose(jsa).schmidt_number;
      scan.points.push_back(ScanPoint{fwhm, chirp, k, g2_from_k(k)});
      if (k < best_k) {
        best_k = k;
        scan.best = scan.points.size() - 1;
      }
    }
  }
  return scan;
}

}  // namespace pdcsim
