#include "tembp/signals.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "tembp/error.hpp"

namespace tembp {

double sinc(double x) {
  // Truncation error of the three-term series below 1e-4 is < 1e-27.
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

AnalyticSignal AnalyticSignal::zero() { return tone_sum({}); }

AnalyticSignal AnalyticSignal::constant(double value) {
  return tone_sum({ToneComponent{value, 0.0, 0.0, 0.0}});
}

AnalyticSignal AnalyticSignal::tone(double amplitude, double omega, double phase) {
  return tone_sum({ToneComponent{amplitude, omega, phase, 0.0}});
}

AnalyticSignal AnalyticSignal::tone_sum(std::vector<ToneComponent> components) {
  AnalyticSignal s;
  s.kind_ = Kind::tone_sum;
  double bound = 0.0;
  for (const auto& c : components) {
    if (!std::isfinite(c.amplitude) || !std::isfinite(c.omega) ||
        !std::isfinite(c.phase) || !std::isfinite(c.envelope_omega)) {
      throw InvalidInput("tone component parameters must be finite");
    }
    bound += std::abs(c.amplitude);
  }
  s.components_ = std::move(components);
  s.bound_ = bound;
  return s;
}

AnalyticSignal AnalyticSignal::modulated(double carrier_omega, double envelope_omega,
                                         double phase_omega, double amplitude) {
  if (!std::isfinite(carrier_omega) || !std::isfinite(amplitude) ||
      !std::isfinite(envelope_omega) || !std::isfinite(phase_omega) ||
      envelope_omega == 0.0 || phase_omega == 0.0) {
    throw InvalidInput("modulated signal needs finite parameters and nonzero "
                       "envelope and phase frequencies");
  }
  AnalyticSignal s;
  s.kind_ = Kind::modulated;
  s.carrier_ = carrier_omega;
  s.envelope_ = envelope_omega;
  s.phase_mod_ = phase_omega;
  s.amplitude_ = amplitude;
  s.bound_ = std::abs(amplitude);
  return s;
}

double AnalyticSignal::operator()(double t) const {
  if (kind_ == Kind::modulated) {
    return amplitude_ * sinc(envelope_ * t) *
           std::cos(carrier_ * t + sinc(phase_mod_ * t));
  }
  double sum = 0.0;
  for (const auto& c : components_) {
    double v = c.amplitude * std::cos(c.omega * t + c.phase);
    if (c.envelope_omega != 0.0) {
      v *= sinc(c.envelope_omega * t);
    }
    sum += v;
  }
  return sum;
}

SignalFn AnalyticSignal::as_function() const {
  return [copy = *this](double t) { return copy(t); };
}

double eval_signal(const AnalyticSignal& sig, double t) { return sig(t); }

QuadResult integrate(const AnalyticSignal& sig, double a, double b, double tol) {
  if (!(a <= b)) {
    throw InvalidInput("integrate: need a <= b");
  }
  if (!(tol > 0.0)) {
    throw InvalidInput("integrate: tolerance must be positive");
  }
  return integrate_adaptive(sig, a, b, tol);
}

double BandSpec::period() const { return 2.0 * std::numbers::pi / bandwidth; }

BandSpec band_spec_from_edges(double omega_l, double omega_u) {
  if (!(omega_l > 0.0) || !(omega_u > omega_l) || !std::isfinite(omega_u)) {
    throw InvalidInput("band edges must satisfy 0 < omega_l < omega_u");
  }
  BandSpec band;
  band.omega_l = omega_l;
  band.omega_u = omega_u;
  band.bandwidth = omega_u - omega_l;
  band.k0 = static_cast<int>(std::ceil(2.0 * omega_l / band.bandwidth));
  return band;
}

}  // namespace tembp
