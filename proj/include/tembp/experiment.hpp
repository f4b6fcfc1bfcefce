#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tembp/pns.hpp"
#include "tembp/recon.hpp"
#include "tembp/signals.hpp"
#include "tembp/tem.hpp"

namespace tembp {

enum class Mode { single_tem, two_tem, pns };

std::string mode_name(Mode mode);

/// One experiment, as loaded from an INI-style config file.
struct ExperimentConfig {
  std::string name = "experiment";
  Mode mode = Mode::two_tem;
  AnalyticSignal signal = AnalyticSignal::zero();
  std::string signal_kind = "zero";

  TemParams tem;
  double alpha_fraction = 1.5;   // alpha_A / delta for two_tem
  double lowpass_omega = 0.0;    // rad/s, single_tem
  BandSpec band;                 // two_tem and pns
  double pns_shift_fraction = 0.0;  // d / T

  TimeWindow window{-1.0, 1.0};
  double eval_step = 1e-3;
  double guard_fraction = 0.15;

  double sv_cutoff = 1e-8;
  double quad_tol = 1e-9;
  double spike_tol = 1e-10;
  KnotPairing pairing = KnotPairing::odd_anchored;
  int threads = 0;

  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;

  /// Throws InvalidInput if any parameter constraint is violated.
  void validate() const;
};

/// Parses the INI-style config. Numbers accept plain decimals or p/q ratios.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ChannelStats {
  std::string tag;
  std::size_t count = 0;
  double min_gap = 0.0;
  double max_gap = 0.0;
  double mean_gap = 0.0;
};

struct GramDiagnostics {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  long effective_rank = 0;
  double relative_residual = 0.0;
  std::size_t failed_entries = 0;
};

struct ExperimentReport {
  std::string name;
  std::string mode;
  TimeWindow window;
  TimeWindow central;
  double eval_step = 0.0;
  std::uint64_t seed = 0;

  std::vector<ChannelStats> channels;
  double mean_gap = 0.0;          // average of per-channel mean gaps
  double max_gap = 0.0;           // largest per-channel gap
  double tem_interval = 0.0;      // 2 kappa delta / (b - c); PNS: shift-free period
  double merged_max_gap = 0.0;    // two_tem and pns
  double period_T = 0.0;          // 2 pi / B when a band is configured
  bool premise_holds = true;      // merged_max_gap < period_T
  std::optional<GramDiagnostics> gram;

  std::optional<double> snr_db;   // empty when the signal has zero energy
  double max_abs_error = 0.0;
  std::size_t central_points = 0;
  std::vector<std::string> files;

  nlohmann::ordered_json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
};

struct RunResult {
  ExperimentReport report;
  double runtime_seconds = 0.0;
};

/// Runs the configured pipeline and writes spikes.txt (TEM modes) or
/// samples.csv (PNS), reconstruction.csv, psd.csv and report.json into
/// cfg.out_dir. Output files are a deterministic function of the config.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Evaluation grid start + i * step covering the window.
std::vector<double> evaluation_grid(TimeWindow window, double step);

/// 10 log10(sum x^2 / sum e^2); empty when sum x^2 == 0 or sum e^2 == 0.
std::optional<double> snr_db(std::span<const double> truth,
                             std::span<const double> error);

/// One-sided Hann-windowed periodogram of uniform samples at rate fs.
/// Returns (frequency_hz, power_db) pairs.
std::vector<std::pair<double, double>> periodogram(std::span<const double> samples,
                                                   double fs);

/// Spike-rate, gap and SNR deltas (b - a). Throws InvalidInput when the two
/// reports cover different windows.
nlohmann::ordered_json compare_runs(const ExperimentReport& a,
                                    const ExperimentReport& b);

ExperimentReport load_report(const std::filesystem::path& path);

}  // namespace tembp
