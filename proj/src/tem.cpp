#include "tembp/tem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tembp/error.hpp"

namespace tembp {

namespace {

// 2 kappa delta - b (t1 - t0). Results inside the rounding floor of the
// subtraction carry no information and are flushed to zero.
double amplitude_integral(const TemParams& p, double t0, double t1) {
  const double full = 2.0 * p.kappa * p.delta;
  const double y = full - p.bias * (t1 - t0);
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                       (full + p.bias * (std::abs(t0) + std::abs(t1)));
  return std::abs(y) <= floor ? 0.0 : y;
}

}  // namespace

double TemParams::tem_interval() const {
  return 2.0 * kappa * delta / (bias - bound);
}

double TemParams::min_gap() const { return 2.0 * kappa * delta / (bias + bound); }

void TemParams::validate() const {
  if (!(bound >= 0.0) || !(bias > bound) || !std::isfinite(bias)) {
    throw InvalidInput("TEM parameters need bias > amplitude bound >= 0");
  }
  if (!(kappa > 0.0) || !(delta > 0.0) || !std::isfinite(kappa) ||
      !std::isfinite(delta)) {
    throw InvalidInput("TEM parameters need kappa > 0 and delta > 0");
  }
}

TemParams TemParams::from_interval(double kappa, double interval, double bias,
                                   double bound) {
  TemParams p{kappa, interval * (bias - bound) / (2.0 * kappa), bias, bound};
  p.validate();
  return p;
}

namespace {

// Integral of (x + b) over [lo, hi].
double biased_integral(const SignalFn& sig, double bias, double lo, double hi,
                       double tol) {
  auto integrand = [&](double u) { return sig(u) + bias; };
  return integrate_adaptive(integrand, lo, hi, tol).value;
}

}  // namespace

SpikeTrain encode(const SignalFn& sig, const TemParams& params, TimeWindow window,
                  double initial_state, Channel channel, const EncoderOptions& opts) {
  params.validate();
  if (!(window.end > window.start)) {
    throw InvalidInput("encode: empty time window");
  }
  if (!(initial_state >= -params.delta) || !(initial_state < params.delta)) {
    throw InvalidInput("encode: initial integrator state must lie in [-delta, delta)");
  }

  SpikeTrain train;
  train.channel = channel;
  train.params = params;
  train.window = window;

  const double b = params.bias;
  const double c = params.bound;
  const double full = 2.0 * params.kappa * params.delta;
  double t = window.start;
  double target = params.kappa * (params.delta - initial_state);

  while (true) {
    // F(s) = int_t^s (x + b) du - target, strictly increasing while |x| < b.
    const double step = target / (b + c);
    double lo = t + step;
    if (lo > window.end) {
      break;
    }
    double f_lo = biased_integral(sig, b, t, lo, opts.quad_tol) - target;
    double hi;
    double f_hi;
    if (f_lo > 0.0) {
      // The signal left its stated bound; fall back to the trivial bracket.
      hi = lo;
      f_hi = f_lo;
      lo = t;
      f_lo = -target;
    } else {
      hi = lo;
      f_hi = f_lo;
      int marches = 0;
      bool past_end = false;
      while (f_hi < 0.0) {
        lo = hi;
        f_lo = f_hi;
        if (lo >= window.end) {
          past_end = true;
          break;
        }
        hi = std::min(lo + step, window.end);
        f_hi = f_lo + biased_integral(sig, b, lo, hi, opts.quad_tol);
        if (++marches > 100000) {
          throw NumericalFailure("encode: integrator failed to reach threshold");
        }
      }
      if (past_end) {
        break;
      }
    }

    // Safeguarded Newton on [lo, hi]; the derivative of F is x(s) + b.
    double s = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    const double anchor = lo;
    const double f_anchor = f_lo;
    for (int iter = 0; iter < 200; ++iter) {
      const double fs = f_anchor + biased_integral(sig, b, anchor, s, opts.quad_tol);
      if (fs == 0.0) {
        break;
      }
      if (fs < 0.0) {
        lo = s;
      } else {
        hi = s;
      }
      const double slope = sig(s) + b;
      if (slope > 0.0 && std::abs(fs / slope) <= opts.spike_tol) {
        s = std::clamp(s - fs / slope, lo, hi);
        break;
      }
      double next = slope > 0.0 ? s - fs / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) {
        next = 0.5 * (lo + hi);
      }
      s = next;
      if (hi - lo <= opts.spike_tol) {
        break;
      }
      if (iter == 199) {
        throw NumericalFailure("encode: spike refinement did not converge");
      }
    }
    if (s > window.end) {
      break;
    }
    if (!train.times.empty() && !(s > train.times.back())) {
      throw NumericalFailure("encode: non-increasing spike time");
    }
    train.times.push_back(s);
    t = s;
    target = full;
  }
  return train;
}

SpikeTrain encode(const AnalyticSignal& sig, const TemParams& params,
                  TimeWindow window, const EncoderOptions& opts) {
  return encode(sig.as_function(), params, window, -params.delta, Channel::single,
                opts);
}

AmplitudeIntegralSeq amplitude_integrals(const SpikeTrain& train) {
  AmplitudeIntegralSeq seq;
  seq.stride = 1;
  const auto& ts = train.times;
  if (ts.size() < 2) {
    return seq;
  }
  seq.times.reserve(ts.size() - 1);
  seq.values.reserve(ts.size() - 1);
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    seq.times.push_back(ts[k]);
    seq.values.push_back(amplitude_integral(train.params, ts[k], ts[k + 1]));
  }
  return seq;
}

double channel_a_initial_state(const TemParams& params, double alpha) {
  double v = -params.delta + alpha;
  if (v >= params.delta) {
    v -= 2.0 * params.delta;
  }
  return v;
}

TwoChannelTrains encode_two_channel(const SignalFn& sig, const TemParams& params,
                                    TimeWindow window, double alpha,
                                    const EncoderOptions& opts, Exec exec) {
  params.validate();
  if (!(alpha > params.delta) || !(alpha <= 2.0 * params.delta)) {
    throw InvalidInput("encode_two_channel: alpha must lie in (delta, 2 delta]");
  }
  const double state_a = channel_a_initial_state(params, alpha);
  TwoChannelTrains out;
  if (exec == Exec::parallel) {
#pragma omp parallel sections
    {
#pragma omp section
      out.a = encode(sig, params, window, state_a, Channel::a, opts);
#pragma omp section
      out.b = encode(sig, params, window, -params.delta, Channel::b, opts);
    }
  } else {
    out.a = encode(sig, params, window, state_a, Channel::a, opts);
    out.b = encode(sig, params, window, -params.delta, Channel::b, opts);
  }
  return out;
}

TwoChannelTrains encode_two_channel(const AnalyticSignal& sig,
                                    const TemParams& params, TimeWindow window,
                                    double alpha, const EncoderOptions& opts,
                                    Exec exec) {
  return encode_two_channel(sig.as_function(), params, window, alpha, opts, exec);
}

MergedSequence interleave(const SpikeTrain& a, const SpikeTrain& b) {
  const TemParams& pa = a.params;
  const TemParams& pb = b.params;
  if (pa.kappa != pb.kappa || pa.delta != pb.delta || pa.bias != pb.bias) {
    throw InvalidInput("interleave: channels must share TEM parameters");
  }
  const std::size_t na = a.times.size();
  const std::size_t nb = b.times.size();
  const std::size_t pairs = std::min(na, nb);

  MergedSequence merged;
  merged.times.reserve(na + nb);
  for (std::size_t k = 0; k < pairs; ++k) {
    merged.times.push_back(a.times[k]);
    merged.times.push_back(b.times[k]);
  }
  if (na == nb + 1) {
    merged.times.push_back(a.times[nb]);
  } else if (na != nb) {
    throw InterleavingViolation(
        "interleave: channel spike counts " + std::to_string(na) + " (A) and " +
            std::to_string(nb) + " (B) cannot alternate",
        2 * pairs);
  }
  for (std::size_t i = 0; i + 1 < merged.times.size(); ++i) {
    const double gap = merged.times[i + 1] - merged.times[i];
    if (!(gap > 0.0)) {
      throw InterleavingViolation(
          "interleave: strict alternation violated at merged index " +
              std::to_string(i + 1),
          i + 1);
    }
    merged.max_gap = std::max(merged.max_gap, gap);
  }

  merged.integrals.stride = 2;
  for (std::size_t l = 0; l + 2 < merged.times.size(); ++l) {
    merged.integrals.times.push_back(merged.times[l]);
    merged.integrals.values.push_back(
        amplitude_integral(pa, merged.times[l], merged.times[l + 2]));
  }
  return merged;
}

}  // namespace tembp
