#include "doctest.h"

#include <cmath>
#include <numbers>

#include "tembp/error.hpp"
#include "tembp/tem.hpp"

using namespace tembp;
using std::numbers::pi;

namespace {

constexpr double kSpikeTol = 1e-10;
constexpr double kEps = 1e-8;  // invariant slack, in units of the compared quantity

AnalyticSignal modulated_signal() {
  return AnalyticSignal::modulated(2 * pi * 50, 2 * pi * 10, 2 * pi * 2.5);
}

TemParams single_params() { return TemParams::from_interval(1.0, 1.0 / 130, 3.0, 2.0); }
TemParams two_channel_params() { return TemParams::from_interval(1.0, 1.0 / 30, 3.0, 2.0); }

void check_gap_bounds(const SpikeTrain& tr) {
  const TemParams& p = tr.params;
  for (std::size_t k = 0; k + 1 < tr.times.size(); ++k) {
    const double gap = tr.times[k + 1] - tr.times[k];
    REQUIRE(gap > 0.0);
    CHECK(gap <= p.tem_interval() + kSpikeTol);
    CHECK(gap >= p.min_gap() - kSpikeTol);
  }
}

void check_integral_identity(const SpikeTrain& tr, const AnalyticSignal& sig) {
  const AmplitudeIntegralSeq y = amplitude_integrals(tr);
  REQUIRE(y.values.size() + 1 == tr.times.size());
  const double quad_tol = 1e-12;
  for (std::size_t k = 0; k < y.values.size(); ++k) {
    const double oracle = integrate(sig, tr.times[k], tr.times[k + 1], quad_tol).value;
    CHECK(std::abs(oracle - y.values[k]) <= quad_tol + tr.params.bias * kSpikeTol);
  }
}

}  // namespace

TEST_CASE("TemParams derived quantities and validation") {
  const TemParams p{1.3, 0.02, 2.0, 1.0};
  CHECK(p.tem_interval() == doctest::Approx(2 * 1.3 * 0.02 / 1.0));
  CHECK(p.min_gap() == doctest::Approx(2 * 1.3 * 0.02 / 3.0));
  CHECK_NOTHROW(p.validate());

  CHECK_THROWS_AS((TemParams{0.0, 0.1, 2.0, 1.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((TemParams{1.0, -0.1, 2.0, 1.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((TemParams{1.0, 0.1, 1.0, 1.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((TemParams{1.0, 0.1, 2.0, -0.5}.validate()), InvalidInput);

  const TemParams q = single_params();
  CHECK(q.delta == doctest::Approx(1.0 / 260).epsilon(1e-15));
  CHECK(q.tem_interval() == doctest::Approx(1.0 / 130).epsilon(1e-15));
}

TEST_CASE("zero input fires uniformly at 2 kappa delta / b") {
  const TemParams p{1.3, 0.01, 2.0, 1.0};
  const SpikeTrain tr = encode(AnalyticSignal::zero(), p, {0.0, 1.0});
  const double period = 2 * p.kappa * p.delta / p.bias;
  REQUIRE(tr.times.size() == 76);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(std::abs(tr.times[k] - period * static_cast<double>(k + 1)) <= kSpikeTol);
  }
  for (double y : amplitude_integrals(tr).values) {
    CHECK(std::abs(y) <= kEps);
  }
}

TEST_CASE("constant input fires uniformly at 2 kappa delta / (b + c0)") {
  const TemParams p{1.0, 0.01, 2.0, 1.0};
  for (double c0 : {-0.8, 0.35, 1.0}) {
    const SpikeTrain tr = encode(AnalyticSignal::constant(c0), p, {-0.5, 0.5});
    const double period = 2 * p.kappa * p.delta / (p.bias + c0);
    REQUIRE(tr.times.size() > 10);
    for (std::size_t k = 0; k + 1 < tr.times.size(); ++k) {
      CHECK(std::abs(tr.times[k + 1] - tr.times[k] - period) <= kSpikeTol);
    }
    const AmplitudeIntegralSeq y = amplitude_integrals(tr);
    for (std::size_t k = 0; k < y.values.size(); ++k) {
      CHECK(std::abs(y.values[k] - c0 * (tr.times[k + 1] - tr.times[k])) <= kEps);
    }
  }
}

TEST_CASE("first spike honours the initial integrator state") {
  const TemParams p{1.0, 0.05, 2.0, 1.0};
  const SpikeTrain tr =
      encode(AnalyticSignal::zero().as_function(), p, {0.0, 1.0}, 0.02, Channel::a);
  CHECK(tr.channel == Channel::a);
  CHECK(std::abs(tr.times.front() - (p.delta - 0.02) / p.bias) <= kSpikeTol);

  CHECK_THROWS_AS(encode(AnalyticSignal::zero().as_function(), p, {0.0, 1.0}, p.delta),
                  InvalidInput);
  CHECK_THROWS_AS(
      encode(AnalyticSignal::zero().as_function(), p, {0.0, 1.0}, -p.delta - 1e-3),
      InvalidInput);
  CHECK_THROWS_AS(encode(AnalyticSignal::zero(), p, {1.0, 1.0}), InvalidInput);
}

TEST_CASE("amplitude_integrals needs two spikes") {
  const TemParams p{1.0, 0.5, 2.0, 1.0};
  const SpikeTrain one = encode(AnalyticSignal::zero(), p, {0.0, 0.6});
  CHECK(one.times.size() == 1);
  CHECK(amplitude_integrals(one).values.empty());
}

TEST_CASE("modulated signal, single channel: count, gap bounds and integral identity") {
  const AnalyticSignal x = modulated_signal();
  const SpikeTrain tr = encode(x, single_params(), {-1.0, 1.0});
  CHECK(tr.times.size() == 780);
  check_gap_bounds(tr);
  check_integral_identity(tr, x);

  const SpikeTrain again = encode(x, single_params(), {-1.0, 1.0});
  CHECK(again.times == tr.times);
}

TEST_CASE("gap bounds and integral identity on a tone sum") {
  const AnalyticSignal x = AnalyticSignal::tone_sum(
      {{0.6, 2 * pi * 41, 0.2, 0.0}, {0.9, 2 * pi * 58, -0.7, 2 * pi * 4}});
  const TemParams p = TemParams::from_interval(1.0, 1.0 / 90, 2.0, x.amplitude_bound());
  const SpikeTrain tr = encode(x, p, {0.0, 0.5});
  check_gap_bounds(tr);
  check_integral_identity(tr, x);
}

TEST_CASE("two channels on zero input: fixed lags") {
  const TemParams p{1.0, 0.02, 2.0, 1.0};
  const double alpha = 1.5 * p.delta;
  const auto tr = encode_two_channel(AnalyticSignal::zero(), p, {0.0, 1.0}, alpha);
  const double period = 2 * p.kappa * p.delta / p.bias;
  // B lags A by kappa alpha / b; the next A follows B by kappa (2 delta - alpha) / b.
  const double lag = p.kappa * alpha / p.bias;
  const double lead = p.kappa * (2 * p.delta - alpha) / p.bias;
  CHECK(lag + lead == doctest::Approx(period));
  REQUIRE(tr.a.times.size() >= tr.b.times.size());
  for (std::size_t k = 0; k < tr.b.times.size(); ++k) {
    CHECK(std::abs(tr.b.times[k] - tr.a.times[k] - lag) <= 2 * kSpikeTol);
    if (k + 1 < tr.a.times.size()) {
      CHECK(std::abs(tr.a.times[k + 1] - tr.b.times[k] - lead) <= 2 * kSpikeTol);
    }
  }

  const MergedSequence m = interleave(tr.a, tr.b);
  for (std::size_t l = 0; l + 1 < m.times.size(); ++l) {
    const double gap = m.times[l + 1] - m.times[l];
    CHECK(std::abs(gap - (l % 2 == 0 ? lag : lead)) <= 2 * kSpikeTol);
  }
}

TEST_CASE("channel A initial state and alpha range") {
  const TemParams p{1.0, 0.02, 2.0, 1.0};
  CHECK(channel_a_initial_state(p, 1.5 * p.delta) == doctest::Approx(0.5 * p.delta));
  CHECK(channel_a_initial_state(p, 1.1 * p.delta) == doctest::Approx(0.1 * p.delta));
  CHECK(channel_a_initial_state(p, 2.0 * p.delta) == doctest::Approx(-p.delta));
  CHECK_THROWS_AS(encode_two_channel(AnalyticSignal::zero(), p, {0.0, 1.0}, p.delta),
                  InvalidInput);
  CHECK_THROWS_AS(encode_two_channel(AnalyticSignal::zero(), p, {0.0, 1.0}, 2.01 * p.delta),
                  InvalidInput);
}

TEST_CASE("modulated signal, two channels: counts, interleaving and merged integrals") {
  const AnalyticSignal x = modulated_signal();
  const TemParams p = two_channel_params();
  const auto tr = encode_two_channel(x, p, {-1.0, 1.0}, 1.5 * p.delta);
  CHECK(tr.a.times.size() == 180);
  CHECK(tr.b.times.size() == 180);
  check_gap_bounds(tr.a);
  check_gap_bounds(tr.b);

  const MergedSequence m = interleave(tr.a, tr.b);
  CHECK(m.max_gap < 1.0 / 30);
  const AmplitudeIntegralSeq ya = amplitude_integrals(tr.a);
  const AmplitudeIntegralSeq yb = amplitude_integrals(tr.b);
  CHECK(m.integrals.stride == 2);
  for (std::size_t l = 0; l < m.integrals.values.size(); ++l) {
    const double expected = l % 2 == 0 ? ya.values[l / 2] : yb.values[l / 2];
    CHECK(m.integrals.values[l] == expected);
    const double oracle = integrate(x, m.times[l], m.times[l + 2], 1e-12).value;
    CHECK(std::abs(oracle - m.integrals.values[l]) <= 1e-12 + p.bias * 2 * kSpikeTol);
  }

  const auto serial = encode_two_channel(x, p, {-1.0, 1.0}, 1.5 * p.delta, {}, Exec::serial);
  const auto parallel =
      encode_two_channel(x, p, {-1.0, 1.0}, 1.5 * p.delta, {}, Exec::parallel);
  CHECK(serial.a.times == parallel.a.times);
  CHECK(serial.b.times == parallel.b.times);
}

TEST_CASE("two channels interleave strictly for alpha in (delta, 2 delta)") {
  const AnalyticSignal sigs[] = {
      modulated_signal(),
      AnalyticSignal::tone_sum({{1.0, 2 * pi * 38, 0.0, 0.0}, {0.9, 2 * pi * 63, 1.0, 0.0}})};
  for (const auto& x : sigs) {
    const TemParams p = TemParams::from_interval(1.0, 1.0 / 30, 3.0, 2.0);
    for (double f : {1.1, 1.5, 1.9, 1.99}) {
      CAPTURE(f);
      const auto tr = encode_two_channel(x, p, {-1.0, 1.0}, f * p.delta);
      const MergedSequence m = interleave(tr.a, tr.b);
      for (std::size_t k = 0; k < tr.b.times.size(); ++k) {
        CHECK(tr.a.times[k] < tr.b.times[k]);
        if (k + 1 < tr.a.times.size()) CHECK(tr.b.times[k] < tr.a.times[k + 1]);
      }
      CHECK(m.max_gap < p.tem_interval());
    }
  }
}

TEST_CASE("alpha = 2 delta puts both integrators in phase") {
  // Both channels start from -delta, so A and B fire together and the strict
  // order cannot hold; interleave reports the first tie.
  const TemParams p = two_channel_params();
  const auto tr = encode_two_channel(modulated_signal(), p, {-1.0, 1.0}, 2.0 * p.delta);
  CHECK(tr.a.times == tr.b.times);
  try {
    interleave(tr.a, tr.b);
    FAIL("expected an interleaving violation");
  } catch (const InterleavingViolation& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("interleave rejects malformed pairs") {
  const TemParams p{1.0, 0.02, 2.0, 1.0};
  SpikeTrain a{{0.1, 0.3, 0.5}, Channel::a, p, {0.0, 1.0}};
  SpikeTrain b{{0.2, 0.4, 0.6}, Channel::b, p, {0.0, 1.0}};
  CHECK_NOTHROW(interleave(a, b));

  SpikeTrain late = b;
  late.times[1] = 0.55;
  try {
    interleave(a, late);
    FAIL("expected an interleaving violation");
  } catch (const InterleavingViolation& e) {
    CHECK(e.index() == 4);
  }

  SpikeTrain short_a = a;
  short_a.times.resize(1);
  CHECK_THROWS_AS(interleave(short_a, b), InvalidInput);

  SpikeTrain other = b;
  other.params.bias = 2.5;
  CHECK_THROWS_AS(interleave(a, other), InvalidInput);
}
