// pdcsim: entangled photon-pair source simulator.
//
// Subcommands: jsa, scan-ck, pipeline, scan-decorrelate, g2. All outputs are
// plain-text matrices or tab-separated tables; nothing is plotted here.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdcsim/config.hpp"
#include "pdcsim/matrix_io.hpp"
#include "pdcsim/measurement.hpp"
#include "pdcsim/reconstruction.hpp"
#include "pdcsim/schmidt.hpp"

namespace fs = std::filesystem;
using namespace pdcsim;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int grid = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file");
  cmd->add_option("--out", opts.out_dir, "output directory (default: $PDCSIM_OUT or config)");
  cmd->add_option("--seed", opts.seed, "override all RNG seeds")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_option("--grid", opts.grid, "override grid.points");
}

struct Session {
  ExperimentConfig cfg;
  fs::path out;
};

Session open_session(const CommonOpts& opts) {
  Session s;
  if (!opts.config_path.empty()) s.cfg = parse_config_file(opts.config_path);
  if (opts.grid > 0) s.cfg.grid_points = opts.grid;
  if (opts.seed_set) {
    s.cfg.tof_seed = opts.seed;
    s.cfg.g2_seed = opts.seed;
  }
  validate(s.cfg);
  for (const auto& w : s.cfg.warnings) std::cerr << "warning: " << w << "\n";

  std::string dir = opts.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("PDCSIM_OUT")) dir = env;
  if (dir.empty()) dir = s.cfg.output_dir;
  s.out = dir;
  fs::create_directories(s.out);
  return s;
}

struct BuiltSource {
  SpectralAmplitude pump;
  JointAmplitude jsa;
  double transmitted_fraction = 1.0;
};

BuiltSource build_source(const ExperimentConfig& cfg) {
  BuiltSource b{make_pump(cfg.pump_spec(), cfg.pump_grid()), JointAmplitude{cfg.signal_grid(), cfg.idler_grid(), {}}, 1.0};
  b.jsa = build_jsa(b.pump, cfg.phasematch_spec(), cfg.signal_grid(), cfg.idler_grid());
  if (cfg.filter_enabled) {
    auto filtered = apply_filters(b.jsa, cfg.signal_filter(), cfg.idler_filter());
    b.jsa = std::move(filtered.jsa);
    b.transmitted_fraction = filtered.transmitted_fraction;
  }
  return b;
}

Metadata grid_metadata(const ExperimentConfig& cfg) {
  return {{"signal_center_thz", format_double(cfg.signal_center_thz())},
          {"idler_center_thz", format_double(cfg.idler_center_thz())},
          {"span_thz", format_double(cfg.auto_span_thz())},
          {"grid_points", std::to_string(cfg.grid_points)},
          {"units", "THz"}};
}

void write_table(const fs::path& path, const std::string& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  out << "# " << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k)
      out << (k ? "\t" : "") << format_double(row[k]);
    out << "\n";
  }
}

void write_summary(const fs::path& path, const Metadata& entries) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
}

int expected_modes(const ExperimentConfig& cfg, double fallback_k) {
  if (cfg.pump_shape == PumpShape::cosine_kernel) return cfg.pump_order + 1;
  if (cfg.pump_shape == PumpShape::weighted_timebins)
    return static_cast<int>(cfg.pump_bin_weights.size());
  return std::max(1, static_cast<int>(std::llround(fallback_k)));
}

// The sum-frequency fringes of a cosine-kernel pump of order n repeat every
// 1/((n+1) dt) THz; the analysis grids must sample at least 4x finer, the
// same way the waveshaper resolution caps the usable order in hardware.
void check_ck_resolution(const ExperimentConfig& cfg, int order) {
  const double dt = cfg.bin_separation_ps();
  const double needed = 0.5 / ((order + 1.0) * dt);
  const double spacing = cfg.signal_grid().spacing();
  if (spacing >= needed)
    throw config_error(
        "grid resolution limits the time-bin order: spacing " + format_double(spacing) +
        " THz per point cannot resolve order " + std::to_string(order) + " fringes (need < " +
        format_double(needed) + " THz); raise grid.points or shrink pump.bin_separation_ps");
}

int cmd_jsa(const CommonOpts& opts) {
  Session s = open_session(opts);
  auto src = build_source(s.cfg);
  auto sd = schmidt_decompose(src.jsa);

  Metadata meta = grid_metadata(s.cfg);
  meta.emplace_back("kind", "jsa");
  write_complex_matrix(s.out / "jsa", src.jsa.values, meta);
  Metadata jsi_meta = grid_metadata(s.cfg);
  jsi_meta.emplace_back("kind", "jsi");
  write_matrix(s.out / "jsi.txt", src.jsa.values.cwiseAbs2(), jsi_meta);

  std::vector<std::vector<double>> weight_rows;
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(sd.weights.size(), 64); ++k)
    weight_rows.push_back({static_cast<double>(k), sd.weights(k)});
  write_table(s.out / "schmidt_weights.tsv", "mode\tweight", weight_rows);

  write_summary(s.out / "summary.txt",
                {{"schmidt_number", format_double(sd.schmidt_number)},
                 {"schmidt_rank", std::to_string(sd.schmidt_rank)},
                 {"g2_predicted", format_double(g2_from_k(sd.schmidt_number))},
                 {"transmitted_fraction", format_double(src.transmitted_fraction)}});
  std::cout << "K = " << format_double(sd.schmidt_number)
            << "  g2 = " << format_double(g2_from_k(sd.schmidt_number))
            << "  rank = " << sd.schmidt_rank << "\n";
  return 0;
}

int cmd_scan_ck(const CommonOpts& opts, int n_max) {
  if (n_max < 0) throw config_error("--n-max must be >= 0");
  Session s = open_session(opts);
  check_ck_resolution(s.cfg, n_max);

  std::vector<std::vector<double>> rows;
  for (int n = 0; n <= n_max; ++n) {
    ExperimentConfig cfg = s.cfg;
    cfg.pump_shape = PumpShape::cosine_kernel;
    cfg.pump_order = n;
    auto src = build_source(cfg);
    auto sd = schmidt_decompose(src.jsa);
    rows.push_back({static_cast<double>(n), n + 1.0, sd.schmidt_number,
                    g2_from_k(sd.schmidt_number)});
    std::cout << "n = " << n << "  K = " << format_double(sd.schmidt_number) << "\n";
  }
  write_table(s.out / "scan_ck.tsv", "n\tk_theory\tk_jsa\tg2_predicted", rows);
  return 0;
}

int cmd_pipeline(const CommonOpts& opts) {
  Session s = open_session(opts);
  auto src = build_source(s.cfg);
  auto sd_forward = schmidt_decompose(src.jsa);

  auto tof = s.cfg.tof_spec();
  auto record = simulate_tof_jsi(src.jsa, tof);
  Metadata rec_meta = grid_metadata(s.cfg);
  rec_meta.emplace_back("kind", "jsi_counts");
  rec_meta.emplace_back("dispersion_ps_per_nm", format_double(record.dispersion_ps_per_nm));
  rec_meta.emplace_back("total_counts", format_double(record.total_counts));
  rec_meta.emplace_back("seed", std::to_string(record.seed));
  write_matrix(s.out / "jsi_counts.txt", record.counts, rec_meta);

  Eigen::MatrixXd restored = richardson_lucy(record.counts, tof.psf, 50, 1e-12, 1e-5);
  Metadata dec_meta = rec_meta;
  dec_meta[dec_meta.size() - 4].second = "jsi_deconvolved";
  write_matrix(s.out / "jsi_deconvolved.txt", restored, dec_meta);

  Eigen::MatrixXd jsi =
      delay_to_frequency(restored, record, src.jsa.signal_grid, src.jsa.idler_grid);
  ReconstructionConfig rc;
  rc.phase_source = src.pump;
  auto reconstructed = reconstruct_jsa(jsi, src.jsa.signal_grid, src.jsa.idler_grid, rc);
  Metadata jr_meta = grid_metadata(s.cfg);
  jr_meta.emplace_back("kind", "jsa_reconstructed");
  write_complex_matrix(s.out / "jsa_reconstructed", reconstructed.values, jr_meta);

  const int k_expected = expected_modes(s.cfg, sd_forward.schmidt_number);
  auto report = analyze_reconstruction(reconstructed, k_expected);

  std::vector<std::vector<double>> weight_rows;
  const Eigen::Index n_rows = std::min<Eigen::Index>(report.weights.size(), 2 * k_expected + 8);
  for (Eigen::Index k = 0; k < n_rows; ++k)
    weight_rows.push_back({static_cast<double>(k),
                           k < sd_forward.weights.size() ? sd_forward.weights(k) : 0.0,
                           report.weights(k), 1.0 / k_expected});
  write_table(s.out / "weights.tsv", "mode\tweight_forward\tweight_reconstructed\tweight_uniform",
              weight_rows);

  write_summary(s.out / "summary.txt",
                {{"k_forward", format_double(sd_forward.schmidt_number)},
                 {"k_reconstructed", format_double(report.schmidt_number)},
                 {"k_pruned", format_double(report.pruned_schmidt_number)},
                 {"k_expected", std::to_string(k_expected)},
                 {"flatness", format_double(report.flatness)},
                 {"seed", std::to_string(record.seed)}});
  std::cout << "K forward = " << format_double(sd_forward.schmidt_number)
            << "  reconstructed = " << format_double(report.schmidt_number)
            << "  pruned = " << format_double(report.pruned_schmidt_number) << "\n";
  return 0;
}

int cmd_scan_decorrelate(const CommonOpts& opts, double fwhm_min, double fwhm_max, int fwhm_steps,
                         double chirp_min, double chirp_max, int chirp_steps) {
  if (fwhm_steps < 1 || chirp_steps < 1) throw config_error("scan steps must be >= 1");
  Session s = open_session(opts);

  ScanGeometry geom;
  geom.pump = s.cfg.pump_spec();
  geom.pump.shape = PumpShape::gaussian;  // the scan shapes only width and chirp
  geom.pm = s.cfg.phasematch_spec();
  if (s.cfg.filter_enabled) {
    geom.signal_filter = s.cfg.signal_filter();
    geom.idler_filter = s.cfg.idler_filter();
  }
  geom.grid_points = s.cfg.grid_points;
  geom.grid_span_thz = s.cfg.grid_span_thz;

  auto linspace = [](double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      v[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1.0);
    return v;
  };
  auto scan = decorrelation_scan(linspace(fwhm_min, fwhm_max, fwhm_steps),
                                 linspace(chirp_min, chirp_max, chirp_steps), geom);

  std::vector<std::vector<double>> rows;
  for (const auto& p : scan.points)
    rows.push_back({p.fwhm_thz, p.chirp_ps2, p.schmidt_number, p.g2});
  write_table(s.out / "scan_decorrelate.tsv", "fwhm_thz\tchirp_ps2\tschmidt_number\tg2", rows);

  const auto& best = scan.points[scan.best];
  write_summary(s.out / "summary.txt",
                {{"best_fwhm_thz", format_double(best.fwhm_thz)},
                 {"best_chirp_ps2", format_double(best.chirp_ps2)},
                 {"best_schmidt_number", format_double(best.schmidt_number)},
                 {"best_g2", format_double(best.g2)}});
  std::cout << "best: fwhm = " << format_double(best.fwhm_thz)
            << " THz  chirp = " << format_double(best.chirp_ps2)
            << " ps^2  K = " << format_double(best.schmidt_number) << "\n";
  return 0;
}

int cmd_g2(const CommonOpts& opts, const std::string& mode) {
  Session s = open_session(opts);
  auto src = build_source(s.cfg);
  auto sd = schmidt_decompose(src.jsa);
  const double predicted = g2_from_k(sd.schmidt_number);

  if (mode == "predict") {
    write_summary(s.out / "g2.txt", {{"mode", "predict"},
                                     {"schmidt_number", format_double(sd.schmidt_number)},
                                     {"g2", format_double(predicted)}});
    std::cout << "g2 = " << format_double(predicted)
              << "  (K = " << format_double(sd.schmidt_number) << ")\n";
    return 0;
  }
  if (mode != "simulate") throw config_error("--mode must be predict or simulate");

  auto est = simulate_g2(sd, s.cfg.gain_spec());
  write_summary(s.out / "g2.txt", {{"mode", "simulate"},
                                   {"schmidt_number", format_double(sd.schmidt_number)},
                                   {"g2_predicted", format_double(predicted)},
                                   {"g2", format_double(est.value)},
                                   {"stderr", format_double(est.stderr_)},
                                   {"mean_photons", format_double(est.mean_photons)},
                                   {"pulses", std::to_string(est.pulses)}});
  std::cout << "g2 = " << format_double(est.value) << " +/- " << format_double(est.stderr_)
            << "  (predicted " << format_double(predicted) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"programmable time-frequency entangled photon-pair source simulator"};
  app.require_subcommand(1);

  CommonOpts jsa_opts, ck_opts, pipe_opts, dec_opts, g2_opts;
  int n_max = 10;
  double fwhm_min = 0.6, fwhm_max = 3.0, chirp_min = -0.3, chirp_max = 0.3;
  int fwhm_steps = 13, chirp_steps = 13;
  std::string g2_mode = "predict";

  auto* jsa_cmd = app.add_subcommand("jsa", "build the joint spectral amplitude and its mode spectrum");
  add_common(jsa_cmd, jsa_opts);

  auto* ck_cmd = app.add_subcommand("scan-ck", "schmidt number vs cosine-kernel order");
  add_common(ck_cmd, ck_opts);
  ck_cmd->add_option("--n-max", n_max, "largest cosine-kernel order");

  auto* pipe_cmd = app.add_subcommand("pipeline", "simulate, deconvolve, and reconstruct the joint spectrum");
  add_common(pipe_cmd, pipe_opts);

  auto* dec_cmd = app.add_subcommand("scan-decorrelate", "pump width / chirp correction scan");
  add_common(dec_cmd, dec_opts);
  dec_cmd->add_option("--fwhm-min", fwhm_min, "smallest pump fwhm (THz)");
  dec_cmd->add_option("--fwhm-max", fwhm_max, "largest pump fwhm (THz)");
  dec_cmd->add_option("--fwhm-steps", fwhm_steps, "number of fwhm samples");
  dec_cmd->add_option("--chirp-min", chirp_min, "smallest chirp correction (ps^2)");
  dec_cmd->add_option("--chirp-max", chirp_max, "largest chirp correction (ps^2)");
  dec_cmd->add_option("--chirp-steps", chirp_steps, "number of chirp samples");

  auto* g2_cmd = app.add_subcommand("g2", "second-order correlation of one arm");
  add_common(g2_cmd, g2_opts);
  g2_cmd->add_option("--mode", g2_mode, "predict | simulate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*jsa_cmd) return cmd_jsa(jsa_opts);
    if (*ck_cmd) return cmd_scan_ck(ck_opts, n_max);
    if (*pipe_cmd) return cmd_pipeline(pipe_opts);
    if (*dec_cmd)
      return cmd_scan_decorrelate(dec_opts, fwhm_min, fwhm_max, fwhm_steps, chirp_min, chirp_max,
                                  chirp_steps);
    if (*g2_cmd) return cmd_g2(g2_opts, g2_mode);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
