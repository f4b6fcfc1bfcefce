#include "tembp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fftw3.h>

#include "tembp/error.hpp"
#include "tembp/parallel.hpp"
#include "tembp/spike_io.hpp"

namespace tembp {

namespace pt = boost::property_tree;
using nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPsdRate = 1000.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidInput("config key '" + key + "': bad number '" + text + "'");
  }
  return v;
}

double parse_number(const std::string& raw, const std::string& key) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return parse_plain(text, key);
  }
  const double num = parse_plain(trim(text.substr(0, slash)), key);
  const double den = parse_plain(trim(text.substr(slash + 1)), key);
  if (den == 0.0) {
    throw InvalidInput("config key '" + key + "': zero denominator");
  }
  return num / den;
}

class ConfigReader {
 public:
  explicit ConfigReader(const pt::ptree& tree) : tree_(tree) {}

  bool has(const std::string& key) const {
    return static_cast<bool>(tree_.get_optional<std::string>(key));
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return trim(tree_.get<std::string>(key, fallback));
  }
  std::string text(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    if (!v) {
      throw InvalidInput("config: missing key '" + key + "'");
    }
    return trim(*v);
  }
  double number(const std::string& key) const { return parse_number(text(key), key); }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

 private:
  const pt::ptree& tree_;
};

AnalyticSignal parse_tones(const std::string& spec) {
  std::vector<ToneComponent> comps;
  std::stringstream items(spec);
  std::string item;
  while (std::getline(items, item, ';')) {
    item = trim(item);
    if (item.empty()) {
      continue;
    }
    std::vector<double> fields;
    std::stringstream parts(item);
    std::string part;
    while (std::getline(parts, part, ':')) {
      fields.push_back(parse_number(part, "signal.components"));
    }
    if (fields.size() < 2 || fields.size() > 4) {
      throw InvalidInput("signal.components: expected amp:freq_hz[:phase[:envelope_hz]]");
    }
    ToneComponent c;
    c.amplitude = fields[0];
    c.omega = kTwoPi * fields[1];
    c.phase = fields.size() > 2 ? fields[2] : 0.0;
    c.envelope_omega = fields.size() > 3 ? kTwoPi * fields[3] : 0.0;
    comps.push_back(c);
  }
  return AnalyticSignal::tone_sum(std::move(comps));
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ChannelStats gap_stats(const std::string& tag, std::span<const double> times) {
  ChannelStats s;
  s.tag = tag;
  s.count = times.size();
  if (times.size() < 2) {
    return s;
  }
  s.min_gap = times[1] - times[0];
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double g = times[k + 1] - times[k];
    s.min_gap = std::min(s.min_gap, g);
    s.max_gap = std::max(s.max_gap, g);
    sum += g;
  }
  s.mean_gap = sum / static_cast<double>(times.size() - 1);
  return s;
}

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("stage '") + name + "': " + e.what());
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(std::string("stage '") + name + "': " + e.what());
  }
}

GramDiagnostics diagnostics(const Reconstruction& r) {
  GramDiagnostics g;
  g.rows = r.rows;
  g.cols = r.cols;
  g.sigma_max = r.solution.sigma_max;
  g.sigma_min = r.solution.sigma_min;
  g.effective_rank = r.solution.effective_rank;
  g.relative_residual = r.solution.relative_residual();
  return g;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidInput("cannot open " + path.string() + " for writing");
  }
  out << body;
}

}  // namespace

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::single_tem:
      return "single_tem";
    case Mode::two_tem:
      return "two_tem";
    case Mode::pns:
      break;
  }
  return "pns";
}

void ExperimentConfig::validate() const {
  if (!(window.end > window.start) || !std::isfinite(window.start) ||
      !std::isfinite(window.end)) {
    throw InvalidInput("config: window must be finite with start < end");
  }
  if (!(eval_step > 0.0) || eval_step > window.length()) {
    throw InvalidInput("config: eval_step must be positive and inside the window");
  }
  if (!(guard_fraction >= 0.0) || !(guard_fraction < 0.5)) {
    throw InvalidInput("config: guard_fraction must lie in [0, 0.5)");
  }
  if (!(sv_cutoff >= 0.0) || !(sv_cutoff < 1.0)) {
    throw InvalidInput("config: sv_cutoff must lie in [0, 1)");
  }
  if (!(quad_tol > 0.0) || !(spike_tol > 0.0)) {
    throw InvalidInput("config: quad_tol and spike_tol must be positive");
  }
  if (mode == Mode::single_tem || mode == Mode::two_tem) {
    tem.validate();
    if (tem.bound < signal.amplitude_bound()) {
      throw InvalidInput("config: tem.bound is below the signal's amplitude bound");
    }
  }
  if (mode == Mode::single_tem && !(lowpass_omega > 0.0)) {
    throw InvalidInput("config: lowpass.cutoff_hz must be positive");
  }
  if (mode == Mode::two_tem && !(alpha_fraction > 1.0 && alpha_fraction <= 2.0)) {
    throw InvalidInput("config: tem.alpha must lie in (1, 2] (units of delta)");
  }
  if (mode == Mode::two_tem || mode == Mode::pns) {
    if (!(band.bandwidth > 0.0) || !(band.omega_l > 0.0)) {
      throw InvalidInput("config: band edges missing or invalid");
    }
  }
  if (mode == Mode::pns) {
    try {
      make_pns_grid(band, pns_shift_fraction * band.period(), window);
    } catch (const DegenerateShift& e) {
      throw InvalidInput(std::string("config: ") + e.what());
    }
  }
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  const ConfigReader r(tree);
  ExperimentConfig cfg;

  cfg.name = r.text("experiment.name", cfg.name);
  const std::string mode = r.text("experiment.mode");
  if (mode == "single_tem") {
    cfg.mode = Mode::single_tem;
  } else if (mode == "two_tem") {
    cfg.mode = Mode::two_tem;
  } else if (mode == "pns") {
    cfg.mode = Mode::pns;
  } else {
    throw InvalidInput("config: unknown mode '" + mode + "'");
  }
  cfg.window.start = r.number("experiment.window_start", cfg.window.start);
  cfg.window.end = r.number("experiment.window_end", cfg.window.end);
  cfg.eval_step = r.number("experiment.eval_step", cfg.eval_step);
  cfg.guard_fraction = r.number("experiment.guard_fraction", cfg.guard_fraction);
  cfg.seed = static_cast<std::uint64_t>(r.number("experiment.seed", 0.0));

  cfg.signal_kind = r.text("signal.kind");
  if (cfg.signal_kind == "modulated") {
    cfg.signal = AnalyticSignal::modulated(
        kTwoPi * r.number("signal.carrier_hz"), kTwoPi * r.number("signal.envelope_hz"),
        kTwoPi * r.number("signal.phase_hz"), r.number("signal.amplitude", 2.0));
  } else if (cfg.signal_kind == "tone") {
    cfg.signal = AnalyticSignal::tone(r.number("signal.amplitude"),
                                      kTwoPi * r.number("signal.freq_hz"),
                                      r.number("signal.phase", 0.0));
  } else if (cfg.signal_kind == "tones") {
    cfg.signal = parse_tones(r.text("signal.components"));
  } else if (cfg.signal_kind == "constant") {
    cfg.signal = AnalyticSignal::constant(r.number("signal.value"));
  } else if (cfg.signal_kind == "zero") {
    cfg.signal = AnalyticSignal::zero();
  } else {
    throw InvalidInput("config: unknown signal kind '" + cfg.signal_kind + "'");
  }

  if (cfg.mode != Mode::pns) {
    cfg.tem.kappa = r.number("tem.kappa", 1.0);
    cfg.tem.bias = r.number("tem.bias");
    cfg.tem.bound = r.number("tem.bound", cfg.signal.amplitude_bound());
    if (r.has("tem.delta") == r.has("tem.tem_interval")) {
      throw InvalidInput("config: give exactly one of tem.delta and tem.tem_interval");
    }
    if (r.has("tem.delta")) {
      cfg.tem.delta = r.number("tem.delta");
    } else {
      const double interval = r.number("tem.tem_interval");
      cfg.tem.delta = interval * (cfg.tem.bias - cfg.tem.bound) / (2.0 * cfg.tem.kappa);
    }
    cfg.alpha_fraction = r.number("tem.alpha", cfg.alpha_fraction);
  }
  if (cfg.mode == Mode::single_tem) {
    cfg.lowpass_omega = kTwoPi * r.number("lowpass.cutoff_hz");
  } else {
    cfg.band = band_spec_from_edges(kTwoPi * r.number("band.lower_hz"),
                                    kTwoPi * r.number("band.upper_hz"));
  }
  if (cfg.mode == Mode::pns) {
    cfg.pns_shift_fraction = r.number("pns.shift_fraction", 1.0 / 7.0);
  }

  cfg.sv_cutoff = r.number("solver.sv_cutoff", cfg.sv_cutoff);
  cfg.quad_tol = r.number("solver.quad_tol", cfg.quad_tol);
  cfg.spike_tol = r.number("solver.spike_tol", cfg.spike_tol);
  cfg.threads = static_cast<int>(r.number("solver.threads", 0.0));
  const std::string pairing = r.text("solver.pairing", "odd");
  if (pairing == "odd") {
    cfg.pairing = KnotPairing::odd_anchored;
  } else if (pairing == "even") {
    cfg.pairing = KnotPairing::even_anchored;
  } else {
    throw InvalidInput("config: solver.pairing must be 'odd' or 'even'");
  }
  cfg.out_dir = r.text("output.dir", cfg.out_dir.string());

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open config " + path.string());
  }
  return parse_config(in);
}

std::vector<double> evaluation_grid(TimeWindow window, double step) {
  const auto n = static_cast<long>(std::floor(window.length() / step + 1e-9));
  std::vector<double> ts(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) {
    ts[static_cast<std::size_t>(i)] = window.start + static_cast<double>(i) * step;
  }
  return ts;
}

std::optional<double> snr_db(std::span<const double> truth,
                             std::span<const double> error) {
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    signal += truth[i] * truth[i];
    noise += error[i] * error[i];
  }
  if (signal == 0.0 || noise == 0.0) {
    return std::nullopt;
  }
  return 10.0 * std::log10(signal / noise);
}

std::vector<std::pair<double, double>> periodogram(std::span<const double> samples,
                                                   double fs) {
  const std::size_t n = samples.size();
  std::vector<std::pair<double, double>> out;
  if (n < 2) {
    return out;
  }
  double* in = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) /
                                           static_cast<double>(n - 1)));
    in[i] = w * samples[i];
    wsum += w * w;
  }
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, spec, FFTW_ESTIMATE);
  fftw_execute(plan);
  const double scale = 1.0 / (fs * wsum);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double p = (spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1]) * scale;
    if (k != 0 && !(n % 2 == 0 && k == n / 2)) {
      p *= 2.0;
    }
    out.emplace_back(static_cast<double>(k) * fs / static_cast<double>(n),
                     10.0 * std::log10(p + 1e-300));
  }
  fftw_destroy_plan(plan);
  fftw_free(spec);
  fftw_free(in);
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  set_worker_threads(cfg.threads);
  const Exec exec = Exec::parallel;
  std::filesystem::create_directories(cfg.out_dir);

  ExperimentReport rep;
  rep.name = cfg.name;
  rep.mode = mode_name(cfg.mode);
  rep.window = cfg.window;
  rep.eval_step = cfg.eval_step;
  rep.seed = cfg.seed;
  const double guard = cfg.guard_fraction * cfg.window.length();
  rep.central = {cfg.window.start + guard, cfg.window.end - guard};

  const std::vector<double> ts = evaluation_grid(cfg.window, cfg.eval_step);
  std::vector<double> truth(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    truth[i] = cfg.signal(ts[i]);
  }
  std::vector<double> estimate;
  const EncoderOptions enc{cfg.spike_tol, 1e-13};
  const ReconOptions ropts{cfg.quad_tol, cfg.sv_cutoff, cfg.pairing, exec};

  switch (cfg.mode) {
    case Mode::single_tem: {
      const SpikeTrain train =
          stage("encode", [&] { return encode(cfg.signal, cfg.tem, cfg.window, enc); });
      rep.channels.push_back(gap_stats("S", train.times));
      rep.tem_interval = cfg.tem.tem_interval();
      const Reconstruction rec = stage("reconstruct", [&] {
        return reconstruct_lowpass(train, cfg.lowpass_omega, ropts);
      });
      rep.gram = diagnostics(rec);
      estimate = evaluate_model_grid(rec.model, ts, exec);
      const SpikeTrain trains[] = {train};
      write_spike_file(cfg.out_dir / "spikes.txt", trains);
      rep.files.push_back("spikes.txt");
      break;
    }
    case Mode::two_tem: {
      const TwoChannelTrains two = stage("encode", [&] {
        return encode_two_channel(cfg.signal, cfg.tem, cfg.window,
                                  cfg.alpha_fraction * cfg.tem.delta, enc, exec);
      });
      rep.channels.push_back(gap_stats("A", two.a.times));
      rep.channels.push_back(gap_stats("B", two.b.times));
      rep.tem_interval = cfg.tem.tem_interval();
      const MergedSequence merged = stage("interleave", [&] { return interleave(two.a, two.b); });
      rep.merged_max_gap = merged.max_gap;
      rep.period_T = cfg.band.period();
      rep.premise_holds = merged.max_gap < rep.period_T;
      const Reconstruction rec = stage("reconstruct", [&] {
        return reconstruct_bandpass(merged, cfg.band, ropts);
      });
      rep.gram = diagnostics(rec);
      estimate = evaluate_model_grid(rec.model, ts, exec);
      const SpikeTrain trains[] = {two.a, two.b};
      write_spike_file(cfg.out_dir / "spikes.txt", trains);
      rep.files.push_back("spikes.txt");
      break;
    }
    case Mode::pns: {
      const PnsGrid grid = stage("grid", [&] {
        return make_pns_grid(cfg.band, cfg.pns_shift_fraction * cfg.band.period(),
                             cfg.window);
      });
      const PnsSamples samples = sample_pns(cfg.signal, grid);
      std::vector<double> ta;
      std::vector<double> tb;
      std::string body = "t,channel,value\n";
      for (std::size_t i = 0; i < samples.times.size(); ++i) {
        const bool odd = i % 2 == 1;
        (odd ? tb : ta).push_back(samples.times[i]);
        body += fmt12(samples.times[i]) + (odd ? ",B," : ",A,") +
                fmt12(samples.values[i]) + "\n";
      }
      rep.channels.push_back(gap_stats("A", ta));
      rep.channels.push_back(gap_stats("B", tb));
      rep.tem_interval = grid.period;
      rep.period_T = grid.period;
      rep.merged_max_gap = std::max(grid.shift, grid.period - grid.shift);
      rep.premise_holds = rep.merged_max_gap < rep.period_T;
      estimate = stage("reconstruct",
                       [&] { return reconstruct_pns_grid(samples, grid, ts, exec); });
      write_text(cfg.out_dir / "samples.csv", body);
      rep.files.push_back("samples.csv");
      break;
    }
  }

  double gap_sum = 0.0;
  for (const auto& ch : rep.channels) {
    gap_sum += ch.mean_gap;
    rep.max_gap = std::max(rep.max_gap, ch.max_gap);
  }
  rep.mean_gap = rep.channels.empty() ? 0.0 : gap_sum / static_cast<double>(rep.channels.size());

  std::vector<double> central_truth;
  std::vector<double> central_err;
  std::string csv = "t,x_true,x_hat,abs_err\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double err = std::abs(truth[i] - estimate[i]);
    csv += fmt12(ts[i]) + "," + fmt12(truth[i]) + "," + fmt12(estimate[i]) + "," +
           fmt12(err) + "\n";
    if (ts[i] >= rep.central.start - 1e-12 && ts[i] <= rep.central.end + 1e-12) {
      central_truth.push_back(truth[i]);
      central_err.push_back(err);
      rep.max_abs_error = std::max(rep.max_abs_error, err);
    }
  }
  rep.central_points = central_truth.size();
  rep.snr_db = snr_db(central_truth, central_err);
  write_text(cfg.out_dir / "reconstruction.csv", csv);
  rep.files.push_back("reconstruction.csv");

  const std::vector<double> psd_grid = evaluation_grid(cfg.window, 1.0 / kPsdRate);
  std::vector<double> dense(psd_grid.size());
  for (std::size_t i = 0; i < psd_grid.size(); ++i) {
    dense[i] = cfg.signal(psd_grid[i]);
  }
  std::string psd = "freq_hz,power_db\n";
  for (const auto& [f, p] : periodogram(dense, kPsdRate)) {
    psd += fmt12(f) + "," + fmt12(p) + "\n";
  }
  write_text(cfg.out_dir / "psd.csv", psd);
  rep.files.push_back("psd.csv");

  rep.files.push_back("report.json");
  write_text(cfg.out_dir / "report.json", rep.to_json().dump(2) + "\n");

  RunResult result;
  result.report = std::move(rep);
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

ordered_json ExperimentReport::to_json() const {
  ordered_json j;
  j["schema"] = 1;
  j["name"] = name;
  j["mode"] = mode;
  j["window"] = {window.start, window.end};
  j["central_window"] = {central.start, central.end};
  j["eval_step"] = eval_step;
  j["seed"] = seed;
  ordered_json chans = ordered_json::array();
  for (const auto& c : channels) {
    ordered_json cj;
    cj["tag"] = c.tag;
    cj["count"] = c.count;
    cj["min_gap"] = c.min_gap;
    cj["max_gap"] = c.max_gap;
    cj["mean_gap"] = c.mean_gap;
    chans.push_back(cj);
  }
  j["channels"] = chans;
  j["mean_gap"] = mean_gap;
  j["max_gap"] = max_gap;
  j["tem_interval"] = tem_interval;
  j["merged_max_gap"] = merged_max_gap;
  j["period_T"] = period_T;
  j["premise_holds"] = premise_holds;
  if (gram) {
    ordered_json g;
    g["rows"] = gram->rows;
    g["cols"] = gram->cols;
    g["sigma_max"] = gram->sigma_max;
    g["sigma_min"] = gram->sigma_min;
    g["effective_rank"] = gram->effective_rank;
    g["relative_residual"] = gram->relative_residual;
    g["failed_entries"] = gram->failed_entries;
    j["gram"] = g;
  } else {
    j["gram"] = nullptr;
  }
  ordered_json m;
  if (snr_db) {
    m["snr_db"] = *snr_db;
  } else {
    m["snr_db"] = nullptr;
  }
  m["snr_defined"] = snr_db.has_value();
  m["max_abs_error"] = max_abs_error;
  m["central_points"] = central_points;
  j["metrics"] = m;
  j["files"] = files;
  return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<int>() != 1) {
      throw InvalidInput("report: unsupported schema");
    }
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.window = {j.at("window").at(0).get<double>(), j.at("window").at(1).get<double>()};
    r.central = {j.at("central_window").at(0).get<double>(),
                 j.at("central_window").at(1).get<double>()};
    r.eval_step = j.at("eval_step").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("channels")) {
      r.channels.push_back(ChannelStats{c.at("tag").get<std::string>(),
                                        c.at("count").get<std::size_t>(),
                                        c.at("min_gap").get<double>(),
                                        c.at("max_gap").get<double>(),
                                        c.at("mean_gap").get<double>()});
    }
    r.mean_gap = j.at("mean_gap").get<double>();
    r.max_gap = j.at("max_gap").get<double>();
    r.tem_interval = j.at("tem_interval").get<double>();
    r.merged_max_gap = j.at("merged_max_gap").get<double>();
    r.period_T = j.at("period_T").get<double>();
    r.premise_holds = j.at("premise_holds").get<bool>();
    if (!j.at("gram").is_null()) {
      const auto& g = j.at("gram");
      r.gram = GramDiagnostics{g.at("rows").get<std::size_t>(),
                               g.at("cols").get<std::size_t>(),
                               g.at("sigma_max").get<double>(),
                               g.at("sigma_min").get<double>(),
                               g.at("effective_rank").get<long>(),
                               g.at("relative_residual").get<double>(),
                               g.at("failed_entries").get<std::size_t>()};
    }
    const auto& m = j.at("metrics");
    if (!m.at("snr_db").is_null()) {
      r.snr_db = m.at("snr_db").get<double>();
    }
    r.max_abs_error = m.at("max_abs_error").get<double>();
    r.central_points = m.at("central_points").get<std::size_t>();
    r.files = j.at("files").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("report: ") + e.what());
  }
}

ExperimentReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open report " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("report " + path.string() + ": " + e.what());
  }
  return ExperimentReport::from_json(j);
}

ordered_json compare_runs(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.window.start != b.window.start || a.window.end != b.window.end) {
    throw InvalidInput("compare: reports cover different windows");
  }
  auto total = [](const ExperimentReport& r) {
    std::size_t n = 0;
    for (const auto& c : r.channels) {
      n += c.count;
    }
    return static_cast<double>(n);
  };
  auto row = [](double va, double vb) {
    ordered_json j;
    j["a"] = va;
    j["b"] = vb;
    j["delta"] = vb - va;
    return j;
  };
  ordered_json out;
  out["schema"] = 1;
  out["a"] = a.name;
  out["b"] = b.name;
  out["window"] = {a.window.start, a.window.end};
  out["spike_rate"] = row(total(a) / a.window.length(), total(b) / b.window.length());
  out["max_gap"] = row(a.max_gap, b.max_gap);
  out["mean_gap"] = row(a.mean_gap, b.mean_gap);
  if (a.snr_db && b.snr_db) {
    out["snr_db"] = row(*a.snr_db, *b.snr_db);
  } else {
    out["snr_db"] = nullptr;
  }
  return out;
}

}  // namespace tembp
