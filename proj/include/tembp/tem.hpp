#pragma once

#include <vector>

#include "tembp/parallel.hpp"
#include "tembp/signals.hpp"

namespace tembp {

/// Integrate-and-fire parameters: integrator scale kappa, threshold delta,
/// bias b, and the amplitude bound c of the signals it will see.
struct TemParams {
  double kappa = 1.0;
  double delta = 0.5;
  double bias = 1.0;
  double bound = 0.0;

  /// Largest possible gap between consecutive spikes, 2 kappa delta / (b - c).
  double tem_interval() const;
  /// Smallest possible gap, 2 kappa delta / (b + c).
  double min_gap() const;
  /// Throws InvalidInput unless kappa, delta > 0 and b > c >= 0.
  void validate() const;

  /// Threshold chosen so that tem_interval() == interval.
  static TemParams from_interval(double kappa, double interval, double bias,
                                 double bound);
};

enum class Channel { single, a, b };

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

struct SpikeTrain {
  std::vector<double> times;
  Channel channel = Channel::single;
  TemParams params;
  TimeWindow window;
};

/// Pairs (t_k, y_k) with y_k = 2 kappa delta - b (t_{k+stride} - t_k), the
/// integral of the input over [t_k, t_{k+stride}].
struct AmplitudeIntegralSeq {
  std::vector<double> times;
  std::vector<double> values;
  int stride = 1;
};

struct EncoderOptions {
  double spike_tol = 1e-10;  // seconds
  double quad_tol = 1e-13;   // absolute, per integration step
};

/// Runs one integrate-and-fire channel over `window` starting from integrator
/// state `initial_state` in [-delta, delta). Each spike is located by
/// marching the cumulative integral and refining with safeguarded Newton.
/// Spikes whose defining integral would end past window.end are not emitted.
SpikeTrain encode(const SignalFn& sig, const TemParams& params, TimeWindow window,
                  double initial_state, Channel channel = Channel::single,
                  const EncoderOptions& opts = {});

/// Single-channel encode with the integrator starting at -delta.
SpikeTrain encode(const AnalyticSignal& sig, const TemParams& params,
                  TimeWindow window, const EncoderOptions& opts = {});

AmplitudeIntegralSeq amplitude_integrals(const SpikeTrain& train);

struct TwoChannelTrains {
  SpikeTrain a;
  SpikeTrain b;
};

/// Integrator state of channel A when channel B starts at -delta and A leads
/// B by `alpha` (mod 2 delta), reduced into [-delta, delta).
double channel_a_initial_state(const TemParams& params, double alpha);

/// Two channels sharing `params`, with A's integrator `alpha` ahead of B's.
/// Requires delta < alpha <= 2 delta.
TwoChannelTrains encode_two_channel(const SignalFn& sig, const TemParams& params,
                                    TimeWindow window, double alpha,
                                    const EncoderOptions& opts = {},
                                    Exec exec = Exec::serial);
TwoChannelTrains encode_two_channel(const AnalyticSignal& sig,
                                    const TemParams& params, TimeWindow window,
                                    double alpha, const EncoderOptions& opts = {},
                                    Exec exec = Exec::serial);

/// Merged A/B spike times and the stride-2 amplitude integrals over them.
struct MergedSequence {
  std::vector<double> times;
  AmplitudeIntegralSeq integrals;
  double max_gap = 0.0;
};

/// Merges t_k^A, t_k^B as A0, B0, A1, B1, ... Throws InterleavingViolation
/// (with the offending merged index) unless the order strictly alternates.
MergedSequence interleave(const SpikeTrain& a, const SpikeTrain& b);

}  // namespace tembp
