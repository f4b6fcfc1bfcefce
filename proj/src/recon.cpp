#include "tembp/recon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tembp/error.hpp"
#include "tembp/quadrature.hpp"

namespace tembp {

namespace {

constexpr double kEntryZero = 1e-14;

double clean_entry(double v) { return std::abs(v) < kEntryZero ? 0.0 : v; }

template <class EntryFn>
void fill_matrix(Eigen::MatrixXd& m, const EntryFn& entry, Exec exec,
                 std::size_t& failed) {
  const long rows = m.rows();
  const long cols = m.cols();
  std::size_t misses = 0;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : misses)
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        const QuadResult q = entry(r, c);
        m(r, c) = clean_entry(q.value);
        misses += q.converged ? 0 : 1;
      }
    }
  } else {
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        const QuadResult q = entry(r, c);
        m(r, c) = clean_entry(q.value);
        misses += q.converged ? 0 : 1;
      }
    }
  }
  failed = misses;
}

}  // namespace

KnotSet knots_and_shifts(std::span<const double> merged_times, KnotPairing pairing) {
  const std::size_t n = merged_times.size();
  if (n < 3) {
    throw InvalidInput("knots_and_shifts: need at least 3 merged spike times");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(merged_times[i + 1] > merged_times[i])) {
      throw InvalidInput("knots_and_shifts: merged times must strictly increase");
    }
  }
  KnotSet out;
  const std::size_t m = n - 2;
  out.knots.resize(m);
  for (std::size_t l = 0; l < m; ++l) {
    out.knots[l] = 0.5 * (merged_times[l] + merged_times[l + 2]);
  }

  out.shifts.assign(m, 0.0);
  std::vector<bool> assigned(m, false);
  const std::size_t first = pairing == KnotPairing::odd_anchored ? 1 : 0;
  for (std::size_t l = first; l + 1 < m; l += 2) {
    const double d = out.knots[l + 1] - out.knots[l];
    out.shifts[l] = d;
    out.shifts[l + 1] = d;
    assigned[l] = assigned[l + 1] = true;
  }
  if (m == 1 || (m == 2 && pairing == KnotPairing::odd_anchored)) {
    // No complete pair: fall back to the local merged spacing.
    for (std::size_t l = 0; l < m; ++l) {
      out.shifts[l] = merged_times[l + 1] - merged_times[l];
    }
    return out;
  }
  for (std::size_t l = 0; l < m; ++l) {
    if (assigned[l]) {
      continue;
    }
    out.shifts[l] = l == 0 ? out.shifts[1] : out.shifts[l - 1];
  }
  return out;
}

double kernel_lowpass(double t, double omega) {
  return omega / std::numbers::pi * sinc(omega * t);
}

std::vector<double> lowpass_knots(std::span<const double> times) {
  std::vector<double> knots;
  for (std::size_t l = 0; l + 1 < times.size(); ++l) {
    knots.push_back(0.5 * (times[l] + times[l + 1]));
  }
  return knots;
}

GramSystem build_gram_lowpass(const SpikeTrain& spikes, double omega,
                              const GramOptions& opts) {
  if (spikes.times.size() < 2) {
    throw InvalidInput("build_gram_lowpass: need at least 2 spikes");
  }
  if (!(omega > 0.0)) {
    throw InvalidInput("build_gram_lowpass: cutoff must be positive");
  }
  const auto& ts = spikes.times;
  const std::vector<double> knots = lowpass_knots(ts);
  const auto n = static_cast<long>(knots.size());

  GramSystem sys;
  sys.matrix.resize(n, n);
  auto entry = [&](long k, long l) {
    const double s = knots[l];
    auto g = [=](double u) { return kernel_lowpass(u - s, omega); };
    return integrate_adaptive(g, ts[k], ts[k + 1], opts.quad_tol);
  };
  fill_matrix(sys.matrix, entry, opts.exec, sys.failed_entries);

  const AmplitudeIntegralSeq q = amplitude_integrals(spikes);
  sys.rhs = Eigen::Map<const Eigen::VectorXd>(q.values.data(), n);
  return sys;
}

GramSystem build_gram_bandpass(const MergedSequence& merged, const KnotSet& knots,
                               const BandSpec& band, const GramOptions& opts) {
  const auto& ts = merged.times;
  if (ts.size() < 3) {
    throw InvalidInput("build_gram_bandpass: need at least 3 merged spike times");
  }
  const auto rows = static_cast<long>(merged.integrals.values.size());
  const auto cols = static_cast<long>(knots.knots.size());
  if (rows != static_cast<long>(ts.size()) - 2 ||
      knots.shifts.size() != knots.knots.size()) {
    throw InvalidInput("build_gram_bandpass: inconsistent merged data and knots");
  }

  std::vector<BandpassKernel> kernels;
  kernels.reserve(cols);
  for (long k = 0; k < cols; ++k) {
    kernels.emplace_back(band, knots.shifts[k], KernelForm::product,
                         static_cast<std::size_t>(k));
  }

  GramSystem sys;
  sys.matrix.resize(rows, cols);
  auto entry = [&](long l, long k) {
    const double s = knots.knots[k];
    const BandpassKernel& g = kernels[k];
    if (k % 2 == 0) {
      auto f = [&](double u) { return g(u - s); };
      return integrate_adaptive(f, ts[l], ts[l + 2], opts.quad_tol);
    }
    auto f = [&](double u) { return g(s - u); };
    return integrate_adaptive(f, ts[l], ts[l + 2], opts.quad_tol);
  };
  fill_matrix(sys.matrix, entry, opts.exec, sys.failed_entries);
  sys.rhs = Eigen::Map<const Eigen::VectorXd>(merged.integrals.values.data(), rows);
  return sys;
}

Solution solve_coefficients(const GramSystem& sys, double sv_cutoff) {
  if (sys.matrix.rows() != sys.rhs.size() || sys.matrix.size() == 0) {
    throw InvalidInput("solve_coefficients: system shape mismatch");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.matrix,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Solution out;
  out.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = sv_cutoff * out.sigma_max;
  long rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) {
    ++rank;
  }
  if (rank == 0) {
    throw NumericalFailure("solve_coefficients: all singular values below cutoff");
  }
  out.effective_rank = rank;
  out.sigma_min = sv(sv.size() - 1);

  const Eigen::VectorXd projected =
      svd.matrixU().leftCols(rank).transpose() * sys.rhs;
  const Eigen::VectorXd scaled = projected.cwiseQuotient(sv.head(rank));
  out.coefficients = svd.matrixV().leftCols(rank) * scaled;
  out.residual_norm = (sys.matrix * out.coefficients - sys.rhs).norm();
  out.rhs_norm = sys.rhs.norm();
  return out;
}

ModelEvaluator::ModelEvaluator(const ReconModel& model) : model_(&model) {
  if (model.mode == ReconMode::bandpass) {
    kernels_.reserve(model.knots.size());
    for (std::size_t k = 0; k < model.knots.size(); ++k) {
      kernels_.emplace_back(model.band, model.shifts[k], KernelForm::product, k);
    }
  }
}

double ModelEvaluator::operator()(double t) const {
  const ReconModel& m = *model_;
  double sum = 0.0;
  if (m.mode == ReconMode::lowpass) {
    for (std::size_t l = 0; l < m.knots.size(); ++l) {
      sum += m.coefficients[l] * kernel_lowpass(t - m.knots[l], m.omega);
    }
    return sum;
  }
  for (std::size_t k = 0; k < m.knots.size(); ++k) {
    const double rel = t - m.knots[k];
    sum += m.coefficients[k] * (k % 2 == 0 ? kernels_[k](rel) : kernels_[k](-rel));
  }
  return sum;
}

double ReconModel::operator()(double t) const { return ModelEvaluator(*this)(t); }

double evaluate_model(const ReconModel& model, double t) { return model(t); }

std::vector<double> evaluate_model_grid(const ReconModel& model,
                                        std::span<const double> ts, Exec exec) {
  const ModelEvaluator eval(model);
  std::vector<double> out(ts.size());
  const auto n = static_cast<long>(ts.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      out[i] = eval(ts[i]);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      out[i] = eval(ts[i]);
    }
  }
  return out;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

Reconstruction reconstruct_lowpass(const SpikeTrain& spikes, double omega,
                                   const ReconOptions& opts) {
  const GramSystem sys =
      build_gram_lowpass(spikes, omega, GramOptions{opts.quad_tol, opts.exec});
  Reconstruction out;
  out.rows = static_cast<std::size_t>(sys.matrix.rows());
  out.cols = static_cast<std::size_t>(sys.matrix.cols());
  out.solution = solve_coefficients(sys, opts.sv_cutoff);
  out.model.mode = ReconMode::lowpass;
  out.model.omega = omega;
  out.model.knots = lowpass_knots(spikes.times);
  out.model.coefficients = to_std(out.solution.coefficients);
  return out;
}

Reconstruction reconstruct_bandpass(const MergedSequence& merged, const BandSpec& band,
                                    const ReconOptions& opts) {
  KnotSet knots = knots_and_shifts(merged.times, opts.pairing);
  const GramSystem sys =
      build_gram_bandpass(merged, knots, band, GramOptions{opts.quad_tol, opts.exec});
  Reconstruction out;
  out.rows = static_cast<std::size_t>(sys.matrix.rows());
  out.cols = static_cast<std::size_t>(sys.matrix.cols());
  out.solution = solve_coefficients(sys, opts.sv_cutoff);
  out.model.mode = ReconMode::bandpass;
  out.model.band = band;
  out.model.knots = std::move(knots.knots);
  out.model.shifts = std::move(knots.shifts);
  out.model.coefficients = to_std(out.solution.coefficients);
  return out;
}

double reencode_deviation(const ReconModel& model, const SpikeTrain& original,
                          TimeWindow central, const EncoderOptions& opts) {
  const auto& ts = original.times;
  std::size_t s = 0;
  while (s < ts.size() && ts[s] < central.start) {
    ++s;
  }
  if (s + 1 >= ts.size() || !(central.end > ts[s])) {
    throw InvalidInput("reencode_deviation: fewer than two spikes in the central window");
  }
  const ModelEvaluator eval(model);
  const SignalFn xhat = [&eval](double t) { return eval(t); };
  // Run one TEM interval past the window so spikes near its end are not lost.
  const double stop = central.end + original.params.tem_interval();
  const SpikeTrain again = encode(xhat, original.params, {ts[s], stop},
                                  -original.params.delta, original.channel, opts);
  double worst = 0.0;
  for (std::size_t k = s + 1; k < ts.size() && ts[k] <= central.end; ++k) {
    const std::size_t j = k - s - 1;
    if (j >= again.times.size()) {
      return INFINITY;  // the original fired here but the re-encoding did not
    }
    worst = std::max(worst, std::abs(again.times[j] - ts[k]));
  }
  return worst;
}

}  // namespace tembp
