#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "tembp/error.hpp"
#include "tembp/experiment.hpp"
#include "tembp/spike_io.hpp"

using namespace tembp;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = TEMBP_CONFIG_DIR;

fs::path scratch(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() /
                     ("tembp_test_" + std::to_string(::getpid())) / leaf;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig preset(const std::string& name, const std::string& out, int threads = 0) {
  ExperimentConfig cfg = load_config(kConfigs + "/" + name + ".cfg");
  cfg.out_dir = scratch(out);
  cfg.threads = threads;
  return cfg;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(TEMBP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("zero-signal run: undefined SNR and zero error") {
  const ExperimentConfig cfg = preset("zero_signal", "zero");
  const RunResult run = run_experiment(cfg);
  CHECK_FALSE(run.report.snr_db);
  CHECK(run.report.max_abs_error <= 1e-9);
  CHECK(run.report.central_points == 1401);
  for (const auto& f : run.report.files) CHECK(fs::exists(cfg.out_dir / f));
  const auto j = nlohmann::json::parse(slurp(cfg.out_dir / "report.json"));
  CHECK(j["metrics"]["snr_defined"] == false);
}

TEST_CASE("every preset is byte-identical across runs and pool sizes") {
  for (const char* name : {"modulated_pns", "modulated_two_channel", "zero_signal"}) {
    CAPTURE(name);
    const ExperimentConfig one = preset(name, std::string(name) + "_1", 1);
    const ExperimentConfig three = preset(name, std::string(name) + "_3", 3);
    const RunResult a = run_experiment(one);
    run_experiment(three);
    for (const auto& f : a.report.files) {
      CAPTURE(f);
      CHECK(slurp(one.out_dir / f) == slurp(three.out_dir / f));
    }
  }
}

TEST_CASE("report SNR matches a recomputation from the emitted CSV") {
  const ExperimentConfig cfg = preset("modulated_pns", "pns_csv");
  const RunResult run = run_experiment(cfg);
  std::ifstream in(cfg.out_dir / "reconstruction.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x_true,x_hat,abs_err");
  double sig = 0.0;
  double noise = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double v[4];
    std::istringstream s(line);
    char comma;
    s >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
    ++rows;
    if (v[0] < run.report.central.start - 1e-9 || v[0] > run.report.central.end + 1e-9) continue;
    sig += v[1] * v[1];
    noise += v[3] * v[3];
  }
  CHECK(rows == 2001);
  REQUIRE(run.report.snr_db);
  CHECK(std::abs(10 * std::log10(sig / noise) - *run.report.snr_db) <= 1e-9);
}

TEST_CASE("emitted spike file round-trips to the in-memory trains") {
  const ExperimentConfig cfg = preset("modulated_two_channel", "two_spikes");
  run_experiment(cfg);
  const fs::path path = cfg.out_dir / "spikes.txt";
  const auto trains = read_spike_file(path);
  REQUIRE(trains.size() == 2);
  const auto fresh = encode_two_channel(cfg.signal, cfg.tem, cfg.window,
                                        cfg.alpha_fraction * cfg.tem.delta);
  CHECK(trains[0].params.delta == cfg.tem.delta);
  REQUIRE(trains[0].times.size() == fresh.a.times.size());
  REQUIRE(trains[1].times.size() == fresh.b.times.size());
  for (std::size_t k = 0; k < fresh.a.times.size(); ++k) {
    CHECK(std::abs(trains[0].times[k] - fresh.a.times[k]) <= 1e-12);
  }
  std::ostringstream again;
  write_spike_file(again, trains);
  CHECK(again.str() == slurp(path));
}

TEST_CASE("single vs two-channel comparison") {
  const RunResult single = run_experiment(preset("modulated_single", "cmp_single"));
  const RunResult two = run_experiment(preset("modulated_two_channel", "cmp_two"));
  REQUIRE(single.report.snr_db);
  REQUIRE(two.report.snr_db);
  // First-run values pinned as regression goldens.
  CHECK(*single.report.snr_db == doctest::Approx(80.011).epsilon(1e-4));
  CHECK(*two.report.snr_db == doctest::Approx(72.926).epsilon(1e-4));
  CHECK(two.report.mean_gap > 2 * single.report.mean_gap);
  for (const auto& c : two.report.channels) CHECK(c.count < single.report.channels[0].count);
  const auto cmp = compare_runs(single.report, two.report);
  CHECK(cmp["mean_gap"]["delta"].get<double>() > 0.0);
  CHECK(cmp["spike_rate"]["delta"].get<double>() < 0.0);
}

TEST_CASE("pipeline errors name their stage") {
  ExperimentConfig cfg = preset("zero_signal", "degenerate");
  // Zero input with alpha = 1.5 delta puts even-anchored knot shifts at T/4,
  // where (K0 + 1) d / T = 1.
  cfg.pairing = KnotPairing::even_anchored;
  try {
    run_experiment(cfg);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(std::string(e.what()).find("stage 'reconstruct'") != std::string::npos);
  }
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch("cli");
  CHECK(cli("validate " + kConfigs + "/modulated_single.cfg") == 0);
  CHECK(cli("validate " + (dir / "absent.cfg").string()) == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("run") == 2);

  const std::string bad = slurp(kConfigs + "/modulated_pns.cfg");
  write_file(dir / "bad.cfg", bad.substr(0, bad.find("[pns]")) + "[pns]\nshift_fraction = 1/3\n");
  CHECK(cli("validate " + (dir / "bad.cfg").string()) == 2);

  const std::string zero = slurp(kConfigs + "/zero_signal.cfg");
  write_file(dir / "degenerate.cfg", zero + "\n[solver]\npairing = even\n");
  CHECK(cli("run " + (dir / "degenerate.cfg").string() + " --out-dir " +
            (dir / "degenerate").string()) == 3);

  CHECK(cli("run " + kConfigs + "/modulated_pns.cfg --out-dir " + (dir / "pns").string() +
            " --seed 5 --sv-cutoff 1e-9 --quad-tol 1e-9") == 0);
  const ExperimentReport rep = load_report(dir / "pns" / "report.json");
  CHECK(rep.seed == 5);
  CHECK(cli("compare " + (dir / "pns" / "report.json").string() + " " +
            (dir / "pns" / "report.json").string() + " -o " + (dir / "cmp.json").string()) == 0);
  const auto cmp = nlohmann::json::parse(slurp(dir / "cmp.json"));
  CHECK(cmp["snr_db"]["delta"] == 0.0);

  write_file(dir / "short.cfg", [&] {
    std::string s = slurp(kConfigs + "/modulated_pns.cfg");
    return s.replace(s.find("window_end = 1"), 14, "window_end = 0.5");
  }());
  REQUIRE(cli("run " + (dir / "short.cfg").string() + " --out-dir " + (dir / "short").string()) == 0);
  CHECK(cli("compare " + (dir / "pns" / "report.json").string() + " " +
            (dir / "short" / "report.json").string()) == 2);
  fs::remove_all(dir.parent_path());
}
