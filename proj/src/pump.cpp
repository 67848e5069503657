#include "pdcsim/pump.hpp"

#include <cmath>
#include <numbers>

namespace pdcsim {

namespace {

constexpr double kTwoLn2 = 2.0 * std::numbers::ln2;

// Amplitude of a Gaussian whose *intensity* FWHM is fwhm.
double gauss_envelope(double detuning, double fwhm) {
  const double x = detuning / fwhm;
  return std::exp(-kTwoLn2 * x * x);
}

// Physicists' Hermite polynomial, three-term recurrence.
double hermite(int n, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

void check_timebin_resolution(const FrequencyGrid& grid, int bins, double dt) {
  if (dt <= 0.0) throw config_error("pump bin separation must be positive");
  // Null-to-null width of the finest spectral peak is 2/(K*dt); require at
  // least 4 samples across it.
  const double max_spacing = 0.5 / (bins * dt);
  if (grid.spacing() >= max_spacing)
    throw config_error("grid too coarse for " + std::to_string(bins) +
                       " time bins: spacing " + std::to_string(grid.spacing()) +
                       " THz, need < " + std::to_string(max_spacing) + " THz");
}

Eigen::VectorXcd shaper_emulation(const FrequencyGrid& grid, const Eigen::VectorXcd& ideal,
                                  double resolution_thz) {
  const int n = grid.size();
  Eigen::VectorXd mag(n), phase(n);
  for (int k = 0; k < n; ++k) {
    mag(k) = std::abs(ideal(k));
    phase(k) = std::arg(ideal(k));
  }

  // Gaussian amplitude smoothing with the resolution as FWHM.
  const double sigma_bins = resolution_thz / (2.0 * std::sqrt(kTwoLn2) * grid.spacing());
  const int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_bins)));
  Eigen::VectorXd kernel(2 * half + 1);
  for (int j = -half; j <= half; ++j) kernel(j + half) = std::exp(-0.5 * j * j / (sigma_bins * sigma_bins));
  kernel /= kernel.sum();

  Eigen::VectorXd smooth = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int j = -half; j <= half; ++j) {
      const int src = k + j;
      if (src >= 0 && src < n) smooth(k) += kernel(j + half) * mag(src);
    }

  // Phase held constant over each resolvable bin, sampled at the bin center.
  Eigen::VectorXcd out(n);
  for (int k = 0; k < n; ++k) {
    const int bin = static_cast<int>(std::floor((grid.point(k) - grid.min()) / resolution_thz));
    const double bin_center = grid.min() + (bin + 0.5) * resolution_thz;
    int idx = static_cast<int>(std::lround((bin_center - grid.min()) / grid.spacing()));
    idx = std::clamp(idx, 0, n - 1);
    out(k) = std::polar(smooth(k), phase(idx));
  }
  return out;
}

}  // namespace

double SpectralAmplitude::l2_norm() const {
  return std::sqrt(values.squaredNorm() * grid.spacing());
}

double TimeProfile::l2_norm() const {
  const double dt = times_ps.size() > 1 ? times_ps[1] - times_ps[0] : 1.0;
  return std::sqrt(values.squaredNorm() * dt);
}

SpectralAmplitude make_pump(const PumpSpec& spec, const FrequencyGrid& grid) {
  if (spec.fwhm_thz <= 0.0) throw config_error("pump fwhm must be positive");
  if (spec.order < 0) throw config_error("pump order must be non-negative");
  if (grid.span() < 4.0 * spec.fwhm_thz)
    throw config_error("pump grid span " + std::to_string(grid.span()) +
                       " THz must cover at least 4x the pump fwhm");

  const int n = grid.size();
  Eigen::VectorXcd values(n);
  const double nu0 = spec.center_thz;

  switch (spec.shape) {
    case PumpShape::gaussian: {
      for (int k = 0; k < n; ++k) values(k) = gauss_envelope(grid.point(k) - nu0, spec.fwhm_thz);
      break;
    }
    case PumpShape::hermite_gauss: {
      // Width parameter chosen so order 0 reproduces the Gaussian convention.
      const double sigma = spec.fwhm_thz / (2.0 * std::sqrt(std::numbers::ln2));
      for (int k = 0; k < n; ++k) {
        const double x = (grid.point(k) - nu0) / sigma;
        values(k) = hermite(spec.order, x) * std::exp(-0.5 * x * x);
      }
      break;
    }
    case PumpShape::cosine_kernel: {
      const int bins = spec.order + 1;
      check_timebin_resolution(grid, bins, spec.bin_separation_ps);
      for (int k = 0; k < n; ++k) {
        const double d = grid.point(k) - nu0;
        // Sum over bin phases; imaginary parts cancel by the symmetry of the
        // bin offsets, so the mode is real by construction.
        double osc = 0.0;
        for (int b = 0; b < bins; ++b) {
          const double offset = b - 0.5 * (bins - 1);
          osc += std::cos(2.0 * std::numbers::pi * d * spec.bin_separation_ps * offset);
        }
        values(k) = gauss_envelope(d, spec.fwhm_thz) * osc;
      }
      break;
    }
    case PumpShape::weighted_timebins: {
      const int bins = static_cast<int>(spec.bin_weights.size());
      if (bins < 1) throw config_error("invalid bin weights: empty");
      double sum = 0.0;
      for (double w : spec.bin_weights) {
        if (w < 0.0 || !std::isfinite(w)) throw config_error("invalid bin weights: negative or non-finite entry");
        sum += w;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("invalid bin weights: sum " + std::to_string(sum) + " != 1");
      check_timebin_resolution(grid, bins, spec.bin_separation_ps);
      for (int k = 0; k < n; ++k) {
        const double d = grid.point(k) - nu0;
        std::complex<double> osc = 0.0;
        for (int b = 0; b < bins; ++b) {
          const double offset = b - 0.5 * (bins - 1);
          const double theta = 2.0 * std::numbers::pi * d * spec.bin_separation_ps * offset;
          osc += std::sqrt(spec.bin_weights[b]) * std::complex<double>(std::cos(theta), std::sin(theta));
        }
        values(k) = gauss_envelope(d, spec.fwhm_thz) * osc;
      }
      break;
    }
  }

  if (spec.chirp_ps2 != 0.0) {
    for (int k = 0; k < n; ++k) {
      const double w = 2.0 * std::numbers::pi * (grid.point(k) - nu0);
      values(k) *= std::polar(1.0, 0.5 * spec.chirp_ps2 * w * w);
    }
  }

  if (spec.shaper_resolution_thz > 0.0) values = shaper_emulation(grid, values, spec.shaper_resolution_thz);

  const double norm = std::sqrt(values.squaredNorm() * grid.spacing());
  if (norm <= 0.0) throw numeric_error("pump amplitude vanishes on the grid");
  values /= norm;
  return SpectralAmplitude{grid, std::move(values)};
}

std::complex<double> interpolate(const SpectralAmplitude& a, double nu_thz) {
  const double pos = (nu_thz - a.grid.min()) / a.grid.spacing();
  if (pos < 0.0 || pos > a.grid.size() - 1)
    throw config_error("frequency " + std::to_string(nu_thz) + " THz outside pump grid [" +
                       std::to_string(a.grid.min()) + ", " + std::to_string(a.grid.max()) + "]");
  const int k = std::min(static_cast<int>(pos), a.grid.size() - 2);
  const double frac = pos - k;
  return (1.0 - frac) * a.values(k) + frac * a.values(k + 1);
}

TimeProfile pump_time_profile(const SpectralAmplitude& pump) {
  const int n = pump.grid.size();
  const double dnu = pump.grid.spacing();
  const double dt = 1.0 / (n * dnu);

  TimeProfile out;
  out.times_ps.resize(n);
  out.values.resize(n);
  for (int j = 0; j < n; ++j) out.times_ps[j] = (j - n / 2) * dt;

  for (int j = 0; j < n; ++j) {
    std::complex<double> acc = 0.0;
    const double t = out.times_ps[j];
    for (int m = 0; m < n; ++m) {
      const double theta = -2.0 * std::numbers::pi * pump.grid.point(m) * t;
      acc += pump.values(m) * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    out.values(j) = acc * dnu;
  }
  return out;
}

}  // namespace pdcsim
