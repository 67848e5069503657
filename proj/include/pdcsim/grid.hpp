#pragma once

#include <string>
#include <vector>

#include "pdcsim/errors.hpp"

namespace pdcsim {

// Ordinary frequency in THz, time in ps throughout the library.
inline constexpr double kSpeedOfLight = 299792.458;  // nm * THz

inline double wavelength_to_frequency(double lambda_nm) {
  if (lambda_nm <= 0.0) throw config_error("wavelength must be positive, got " + std::to_string(lambda_nm));
  return kSpeedOfLight / lambda_nm;
}

inline double frequency_to_wavelength(double nu_thz) {
  if (nu_thz <= 0.0) throw config_error("frequency must be positive, got " + std::to_string(nu_thz));
  return kSpeedOfLight / nu_thz;
}

// Uniform 1D sampling of optical frequency: center + span * (k/(n-1) - 1/2).
class FrequencyGrid {
 public:
  FrequencyGrid(int n_points, double center_thz, double span_thz)
      : n_(n_points), center_(center_thz), span_(span_thz) {
    if (n_ < 2) throw config_error("FrequencyGrid needs at least 2 points, got " + std::to_string(n_));
    if (span_ <= 0.0) throw config_error("FrequencyGrid span must be positive, got " + std::to_string(span_));
  }

  int size() const { return n_; }
  double center() const { return center_; }
  double span() const { return span_; }
  double spacing() const { return span_ / (n_ - 1); }
  double point(int k) const { return center_ + span_ * (static_cast<double>(k) / (n_ - 1) - 0.5); }
  double min() const { return point(0); }
  double max() const { return point(n_ - 1); }

  std::vector<double> points() const {
    std::vector<double> p(n_);
    for (int k = 0; k < n_; ++k) p[k] = point(k);
    return p;
  }

  bool operator==(const FrequencyGrid& o) const {
    return n_ == o.n_ && center_ == o.center_ && span_ == o.span_;
  }

 private:
  int n_;
  double center_;
  double span_;
};

}  // namespace pdcsim
