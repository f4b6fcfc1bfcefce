#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tembp/parallel.hpp"
#include "tembp/pns.hpp"
#include "tembp/signals.hpp"
#include "tembp/tem.hpp"

namespace tembp {

enum class ReconMode { lowpass, bandpass };

/// How knot shifts are paired. `odd_anchored` pairs knots (1,2), (3,4), ...
/// and `even_anchored` pairs (0,1), (2,3), ...; both members of a pair share
/// the difference of their knot times as their shift.
enum class KnotPairing { odd_anchored, even_anchored };

struct KnotSet {
  std::vector<double> knots;
  std::vector<double> shifts;
};

/// Knots s_l = (t_l + t_{l+2}) / 2 over merged two-channel spike times and
/// their pairwise shifts. Unpaired boundary knots copy the nearest shift.
/// Throws InvalidInput for fewer than 3 times or non-increasing input.
KnotSet knots_and_shifts(std::span<const double> merged_times,
                         KnotPairing pairing = KnotPairing::odd_anchored);

/// Linear system G c = q linking kernel coefficients to amplitude integrals.
struct GramSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::size_t failed_entries = 0;  // quadratures that hit the panel budget
};

struct GramOptions {
  double quad_tol = 1e-9;
  Exec exec = Exec::serial;
};

/// Lowpass kernel sin(Omega t) / (pi t).
double kernel_lowpass(double t, double omega);

/// Lowpass knots s_l = (t_l + t_{l+1}) / 2.
std::vector<double> lowpass_knots(std::span<const double> times);

/// G_kl = integral over [t_k, t_{k+1}] of g_LP(u - s_l); q = amplitude integrals.
GramSystem build_gram_lowpass(const SpikeTrain& spikes, double omega,
                              const GramOptions& opts = {});

/// G_lk = integral over [t_l, t_{l+2}] of the parity-selected bandpass kernel of
/// knot k: g_BP(u - s_k, d_k) for even k, g_BP(s_k - u, d_k) for odd k.
/// Throws DegenerateShift naming the knot whose shift is degenerate.
GramSystem build_gram_bandpass(const MergedSequence& merged, const KnotSet& knots,
                               const BandSpec& band, const GramOptions& opts = {});

struct Solution {
  Eigen::VectorXd coefficients;
  double residual_norm = 0.0;
  double rhs_norm = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  long effective_rank = 0;

  double relative_residual() const {
    return rhs_norm > 0.0 ? residual_norm / rhs_norm : residual_norm;
  }
};

/// Minimum-norm least squares via SVD, discarding singular values below
/// sv_cutoff * sigma_max. Throws NumericalFailure when nothing survives.
Solution solve_coefficients(const GramSystem& sys, double sv_cutoff = 1e-8);

/// Kernel expansion x(t) = sum_l c_l g_l(t - s_l).
struct ReconModel {
  ReconMode mode = ReconMode::lowpass;
  std::vector<double> knots;
  std::vector<double> shifts;  // bandpass only
  std::vector<double> coefficients;
  double omega = 0.0;          // lowpass cutoff
  BandSpec band;               // bandpass only

  double operator()(double t) const;
};

/// Evaluator with per-knot kernel constants precomputed; use this when the
/// model is evaluated many times.
class ModelEvaluator {
 public:
  explicit ModelEvaluator(const ReconModel& model);
  double operator()(double t) const;

 private:
  const ReconModel* model_;
  std::vector<BandpassKernel> kernels_;
};

double evaluate_model(const ReconModel& model, double t);

std::vector<double> evaluate_model_grid(const ReconModel& model,
                                        std::span<const double> ts,
                                        Exec exec = Exec::serial);

struct ReconOptions {
  double quad_tol = 1e-9;
  double sv_cutoff = 1e-8;
  KnotPairing pairing = KnotPairing::odd_anchored;
  Exec exec = Exec::serial;
};

/// Encoded data to fitted model, with the solve diagnostics.
struct Reconstruction {
  ReconModel model;
  Solution solution;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

Reconstruction reconstruct_lowpass(const SpikeTrain& spikes, double omega,
                                   const ReconOptions& opts = {});
Reconstruction reconstruct_bandpass(const MergedSequence& merged,
                                    const BandSpec& band,
                                    const ReconOptions& opts = {});

/// Round-trip check: re-encodes `model` with the original train's parameters,
/// restarting at the train's first spike inside `central` (integrator just
/// reset), and returns the largest deviation from the original spikes that
/// follow up to central.end. Starting inside the central window keeps the
/// edge error of the truncated expansion out of the accumulated spike phase.
double reencode_deviation(const ReconModel& model, const SpikeTrain& original,
                          TimeWindow central, const EncoderOptions& opts = {1e-10, 1e-11});

}  // namespace tembp
