#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "pdcsim/jsa.hpp"
#include "pdcsim/schmidt.hpp"

using namespace pdcsim;
using doctest::Approx;

namespace {

SpectralAmplitude gaussian_pump(double center, double fwhm, double span, int n = 1025) {
  PumpSpec ps;
  ps.shape = PumpShape::gaussian;
  ps.center_thz = center;
  ps.fwhm_thz = fwhm;
  return make_pump(ps, FrequencyGrid(n, center, span));
}

// integrate |jti| over a window around (ts, ti)
double island_mass(const JointTimeIntensity& t, double ts, double ti, double half_window) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < t.intensity.rows(); ++r)
    for (Eigen::Index c = 0; c < t.intensity.cols(); ++c)
      if (std::abs(t.signal_times_ps[static_cast<std::size_t>(r)] - ts) < half_window &&
          std::abs(t.idler_times_ps[static_cast<std::size_t>(c)] - ti) < half_window)
        sum += t.intensity(r, c);
  return sum;
}

}  // namespace

TEST_CASE("jsa is unit-norm and matches a pointwise pump * phasematch product") {
  const double nu_s0 = 198.4, nu_i0 = 196.7;
  auto pump = gaussian_pump(nu_s0 + nu_i0, 1.3, 12.0, 4097);
  PhaseMatchSpec pm{PhaseMatchProfile::sinc, 31.0, 1.0, nu_s0, nu_i0};
  FrequencyGrid sg(64, nu_s0, 5.0), ig(64, nu_i0, 5.0);
  auto jsa = build_jsa(pump, pm, sg, ig);

  CHECK(jsa.values.norm() == Approx(1.0).epsilon(1e-12));

  // ratio of two entries must equal the ratio of the analytic products
  auto analytic = [&](int r, int c) {
    const double ds = sg.point(r) - nu_s0, di = ig.point(c) - nu_i0;
    const double u = ds + di;
    const double amp = std::exp(-2.0 * std::log(2.0) * u * u / (1.3 * 1.3));
    return amp * phasematch_amplitude(pm, sg.point(r), ig.point(c));
  };
  const double got = std::abs(jsa.values(40, 30)) / std::abs(jsa.values(32, 32));
  const double want = std::abs(analytic(40, 30)) / std::abs(analytic(32, 32));
  CHECK(got == Approx(want).epsilon(1e-6));
}

TEST_CASE("jsa build rejects a pump grid that misses the antidiagonal range") {
  auto pump = gaussian_pump(395.1, 0.4, 2.0, 257);  // too narrow for the JSA corners
  PhaseMatchSpec pm{PhaseMatchProfile::gaussian, 45.0, 1.0, 198.4, 196.7};
  FrequencyGrid sg(64, 198.4, 6.0), ig(64, 196.7, 6.0);
  CHECK_THROWS_AS(build_jsa(pump, pm, sg, ig), config_error);
}

TEST_CASE("wide-open filters leave the jsa unchanged") {
  auto pump = gaussian_pump(395.1, 1.3, 20.0, 4097);
  PhaseMatchSpec pm{PhaseMatchProfile::gaussian, 45.0, 1.0, 198.4, 196.7};
  FrequencyGrid sg(96, 198.4, 6.0), ig(96, 196.7, 6.0);
  auto jsa = build_jsa(pump, pm, sg, ig);
  FilterSpec wide_s{198.4, 100.0, FilterProfile::rectangular, 2};
  FilterSpec wide_i{196.7, 100.0, FilterProfile::rectangular, 2};
  auto filtered = apply_filters(jsa, wide_s, wide_i);
  CHECK(filtered.transmitted_fraction == Approx(1.0).epsilon(1e-12));
  CHECK((filtered.jsa.values - jsa.values).norm() == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rectangular filters zero the blocked band and report the kept fraction") {
  auto pump = gaussian_pump(395.1, 1.3, 20.0, 4097);
  PhaseMatchSpec pm{PhaseMatchProfile::gaussian, 45.0, 1.0, 198.4, 196.7};
  FrequencyGrid sg(128, 198.4, 6.0), ig(128, 196.7, 6.0);
  auto jsa = build_jsa(pump, pm, sg, ig);
  FilterSpec fs{198.4, 2.0, FilterProfile::rectangular, 2};
  FilterSpec fi{196.7, 2.0, FilterProfile::rectangular, 2};
  auto filtered = apply_filters(jsa, fs, fi);

  // kept fraction computed independently from the unfiltered intensity
  double kept = 0.0;
  for (Eigen::Index r = 0; r < jsa.values.rows(); ++r)
    for (Eigen::Index c = 0; c < jsa.values.cols(); ++c)
      if (std::abs(sg.point(r) - 198.4) <= 1.0 && std::abs(ig.point(c) - 196.7) <= 1.0)
        kept += std::norm(jsa.values(r, c));
  CHECK(filtered.transmitted_fraction == Approx(kept).epsilon(1e-12));
  CHECK(filtered.jsa.values.norm() == Approx(1.0).epsilon(1e-12));

  // out-of-band entries are exactly zero
  CHECK(std::abs(filtered.jsa.values(0, 64)) == 0.0);
  CHECK(std::abs(filtered.jsa.values(64, 0)) == 0.0);
}

TEST_CASE("filter amplitude profiles have the stated intensity FWHM") {
  for (auto profile : {FilterProfile::gaussian, FilterProfile::supergaussian}) {
    FilterSpec f{10.0, 3.0, profile, 2};
    const double a = filter_amplitude(f, 10.0 + 1.5);
    CHECK(a * a == Approx(0.5).epsilon(1e-12));
    CHECK(filter_amplitude(f, 10.0) == Approx(1.0).epsilon(1e-12));
  }
  FilterSpec r{10.0, 3.0, FilterProfile::rectangular, 2};
  CHECK(filter_amplitude(r, 11.4) == 1.0);
  CHECK(filter_amplitude(r, 11.6) == 0.0);
}

TEST_CASE("separable filtering keeps a separable state separable") {
  // separable when the pump fwhm is sqrt(2) times the phase-matching bandwidth
  auto pump = gaussian_pump(395.1, 2.0, 20.0, 4097);
  PhaseMatchSpec pm{PhaseMatchProfile::gaussian, 45.0, std::sqrt(2.0), 198.4, 196.7};
  FrequencyGrid sg(128, 198.4, 8.0), ig(128, 196.7, 8.0);
  auto jsa = build_jsa(pump, pm, sg, ig);
  FilterSpec fs{198.4, 1.0, FilterProfile::gaussian, 2};
  FilterSpec fi{196.7, 1.5, FilterProfile::gaussian, 2};
  auto filtered = apply_filters(jsa, fs, fi);
  auto sd = schmidt_decompose(filtered.jsa);
  CHECK(sd.schmidt_number == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("g2 and schmidt number convert back and forth") {
  for (double k : {1.0, 1.08, 2.0, 11.0, 300.0}) {
    CHECK(k_from_g2(g2_from_k(k)) == Approx(k).epsilon(1e-12));
  }
  CHECK(g2_from_k(1.0) == Approx(2.0));
  // heralded-source style values
  CHECK(k_from_g2(1.93) == Approx(1.0 / 0.93).epsilon(1e-12));
  CHECK(k_from_g2(1.88) == Approx(1.0 / 0.88).epsilon(1e-12));
  CHECK_THROWS_AS(g2_from_k(0.5), config_error);
  CHECK_THROWS_AS(k_from_g2(1.0), config_error);
  CHECK_THROWS_AS(k_from_g2(2.5), config_error);
}

TEST_CASE("joint time intensity conserves total intensity") {
  auto pump = gaussian_pump(395.1, 1.3, 20.0, 4097);
  PhaseMatchSpec pm{PhaseMatchProfile::sinc, 31.0, 1.0, 198.4, 196.7};
  FrequencyGrid sg(128, 198.4, 8.0), ig(128, 196.7, 8.0);
  auto jsa = build_jsa(pump, pm, sg, ig);
  auto t = jti(jsa);
  CHECK(t.intensity.sum() == Approx(1.0).epsilon(1e-9));
  CHECK(t.intensity.minCoeff() >= 0.0);
}

TEST_CASE("time-binned pumps produce the expected island pattern in the jti") {
  const double dt = 2.0;
  PumpSpec ps;
  ps.shape = PumpShape::cosine_kernel;
  ps.order = 3;  // 4 bins
  ps.center_thz = 395.1;
  ps.fwhm_thz = 1.3;
  ps.bin_separation_ps = dt;
  auto pump = make_pump(ps, FrequencyGrid(8193, 395.1, 24.0));
  PhaseMatchSpec pm{PhaseMatchProfile::gaussian, 45.0, 1.0, 198.4, 196.7};
  FrequencyGrid sg(256, 198.4, 10.0), ig(256, 196.7, 10.0);
  auto jsa = build_jsa(pump, pm, sg, ig);
  auto t = jti(jsa);

  // energy concentrates on the t_s = t_i diagonal in 4 islands at bin centers
  std::vector<double> masses;
  double total_islands = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double tc = dt * (k - 1.5);
    masses.push_back(island_mass(t, tc, tc, dt / 2.0));
    total_islands += masses.back();
  }
  CHECK(total_islands > 0.9);
  for (double m : masses) CHECK(m == Approx(0.25).epsilon(0.05));
}

TEST_CASE("weighted time bins split the jti mass by the weights") {
  PumpSpec ps;
  ps.shape = PumpShape::weighted_timebins;
  ps.center_thz = 395.1;
  ps.fwhm_thz = 1.3;
  ps.bin_separation_ps = 2.0;
  ps.bin_weights = {0.7, 0.3};
  auto pump = make_pump(ps, FrequencyGrid(8193, 395.1, 24.0));
  PhaseMatchSpec pm{PhaseMatchProfile::gaussian, 45.0, 1.0, 198.4, 196.7};
  FrequencyGrid sg(256, 198.4, 10.0), ig(256, 196.7, 10.0);
  auto jsa = build_jsa(pump, pm, sg, ig);
  auto t = jti(jsa);

  const double m0 = island_mass(t, -1.0, -1.0, 1.0);
  const double m1 = island_mass(t, 1.0, 1.0, 1.0);
  CHECK(m0 / m1 == Approx(0.7 / 0.3).epsilon(0.05));
}
