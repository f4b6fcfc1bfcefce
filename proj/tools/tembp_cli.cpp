// tembp: run, validate and compare time-encoding experiments.
//
//   tembp run configs/modulated_two_channel.cfg --out-dir out/two
//   tembp validate configs/modulated_single.cfg
//   tembp compare out/single/report.json out/two/report.json
//
// Exit codes: 0 success, 2 invalid config or input, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "tembp/error.hpp"
#include "tembp/experiment.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<double> quad_tol;
  std::optional<double> sv_cutoff;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

tembp::ExperimentConfig load_with_overrides(const std::string& path,
                                            const RunOverrides& o) {
  tembp::ExperimentConfig cfg = tembp::load_config(path);
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.quad_tol) cfg.quad_tol = *o.quad_tol;
  if (o.sv_cutoff) cfg.sv_cutoff = *o.sv_cutoff;
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

void print_summary(const tembp::RunResult& run) {
  const auto& r = run.report;
  std::printf("%s (%s)\n", r.name.c_str(), r.mode.c_str());
  for (const auto& c : r.channels) {
    std::printf("  channel %s: %zu events, gaps min %.6g max %.6g mean %.6g s\n",
                c.tag.c_str(), c.count, c.min_gap, c.max_gap, c.mean_gap);
  }
  if (r.period_T > 0.0) {
    std::printf("  merged max gap %.6g s vs T = %.6g s (%s)\n", r.merged_max_gap,
                r.period_T, r.premise_holds ? "ok" : "VIOLATED");
  }
  if (r.gram) {
    std::printf("  gram %zux%zu rank %ld sigma [%.3g, %.3g] residual %.3g\n",
                r.gram->rows, r.gram->cols, r.gram->effective_rank, r.gram->sigma_min,
                r.gram->sigma_max, r.gram->relative_residual);
  }
  if (r.snr_db) {
    std::printf("  central SNR %.3f dB, max abs error %.3g\n", *r.snr_db, r.max_abs_error);
  } else {
    std::printf("  central SNR undefined, max abs error %.3g\n", r.max_abs_error);
  }
  std::printf("  runtime %.3f s\n", run.runtime_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrate-and-fire time encoding of bandpass signals"};
  app.require_subcommand(1);

  RunOverrides overrides;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--out-dir", overrides.out_dir, "Output directory");
  run->add_option("--quad-tol", overrides.quad_tol, "Gram quadrature tolerance");
  run->add_option("--sv-cutoff", overrides.sv_cutoff, "Relative singular-value cutoff");
  run->add_option("--seed", overrides.seed, "Seed recorded in the report");
  run->add_option("--threads", overrides.threads, "Worker threads (0: runtime default)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", validate_path, "Experiment config file")->required();

  std::string report_a;
  std::string report_b;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Compare two run reports");
  compare->add_option("report_a", report_a, "First report.json")->required();
  compare->add_option("report_b", report_b, "Second report.json")->required();
  compare->add_option("-o,--output", compare_out, "Write the comparison here too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) {
      const tembp::ExperimentConfig cfg = load_with_overrides(config_path, overrides);
      print_summary(tembp::run_experiment(cfg));
    } else if (*validate) {
      const tembp::ExperimentConfig cfg = tembp::load_config(validate_path);
      std::printf("%s: ok (%s)\n", validate_path.c_str(), tembp::mode_name(cfg.mode).c_str());
    } else if (*compare) {
      const auto cmp = tembp::compare_runs(tembp::load_report(report_a),
                                           tembp::load_report(report_b));
      const std::string text = cmp.dump(2) + "\n";
      std::cout << text;
      if (!compare_out.empty()) {
        std::ofstream(compare_out, std::ios::binary) << text;
      }
    }
  } catch (const tembp::InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const tembp::NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
