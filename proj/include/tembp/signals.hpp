#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tembp/quadrature.hpp"

namespace tembp {

/// Any real signal of time. Encoders and samplers accept this so that
/// reconstructions can be fed back through them.
using SignalFn = std::function<double(double)>;

/// sin(x)/x, equal to 1 at x = 0. Uses the Taylor series near the origin.
double sinc(double x);

/// amplitude * sinc(envelope_omega * t) * cos(omega * t + phase).
/// envelope_omega == 0 drops the envelope; omega == 0 gives a constant.
struct ToneComponent {
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double envelope_omega = 0.0;
};

/// Closed-form test signal with an analytic amplitude bound.
///
/// Two families are supported: finite sums of (optionally sinc-modulated)
/// tones, and the amplitude-and-phase modulated bandpass signal
///   x(t) = A sinc(w1 t) cos(w0 t + sinc(w2 t)),
/// whose bound is A. All angular frequencies are in rad/s.
class AnalyticSignal {
 public:
  enum class Kind { tone_sum, modulated };

  static AnalyticSignal zero();
  static AnalyticSignal constant(double value);
  static AnalyticSignal tone(double amplitude, double omega, double phase = 0.0);
  static AnalyticSignal tone_sum(std::vector<ToneComponent> components);
  /// The modulated bandpass test signal; defaults to amplitude 2.
  static AnalyticSignal modulated(double carrier_omega, double envelope_omega,
                                  double phase_omega, double amplitude = 2.0);

  double operator()(double t) const;
  double amplitude_bound() const { return bound_; }
  Kind kind() const { return kind_; }
  const std::vector<ToneComponent>& components() const { return components_; }
  double carrier_omega() const { return carrier_; }
  double envelope_omega() const { return envelope_; }
  double phase_omega() const { return phase_mod_; }
  double amplitude() const { return amplitude_; }

  SignalFn as_function() const;

 private:
  Kind kind_ = Kind::tone_sum;
  std::vector<ToneComponent> components_;
  double carrier_ = 0.0;
  double envelope_ = 0.0;
  double phase_mod_ = 0.0;
  double amplitude_ = 0.0;
  double bound_ = 0.0;
};

double eval_signal(const AnalyticSignal& sig, double t);

/// Integral of `sig` over [a, b] to absolute tolerance `tol`.
QuadResult integrate(const AnalyticSignal& sig, double a, double b, double tol);

/// Positive-frequency support (omega_l, omega_u) of a bandpass signal.
struct BandSpec {
  double omega_l = 0.0;
  double omega_u = 0.0;
  double bandwidth = 0.0;  // omega_u - omega_l
  int k0 = 0;              // ceil(2 omega_l / bandwidth)

  /// Nominal PNS period 2 pi / bandwidth.
  double period() const;
};

BandSpec band_spec_from_edges(double omega_l, double omega_u);

}  // namespace tembp
