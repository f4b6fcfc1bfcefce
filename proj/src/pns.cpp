#include "tembp/pns.hpp"

#include <cmath>
#include <string>

#include "tembp/error.hpp"

namespace tembp {

namespace {

constexpr double kIntegerTol = 1e-9;
constexpr double kSinTol = 1e-9;

bool near_integer(double v) { return std::abs(v - std::round(v)) < kIntegerTol; }

// [cos(a t - phi) - cos(b t - phi)] / (B t), written without cancellation.
double cosine_difference(double a, double b, double phi, double bw, double t) {
  return -(a - b) / bw * std::sin(0.5 * (a + b) * t - phi) * sinc(0.5 * (a - b) * t);
}

}  // namespace

PnsGrid make_pns_grid(const BandSpec& band, double shift, TimeWindow window) {
  if (!(band.bandwidth > 0.0)) {
    throw InvalidInput("PNS grid: invalid band");
  }
  const double period = band.period();
  if (!(shift > 0.0) || !(shift < period)) {
    throw InvalidInput("PNS grid: shift must lie in (0, T)");
  }
  if (!(window.end > window.start)) {
    throw InvalidInput("PNS grid: empty window");
  }
  const double ratio = shift / period;
  if (near_integer(ratio * band.k0) || near_integer(ratio * (band.k0 + 1))) {
    throw DegenerateShift("PNS grid: shift * K0 / T or shift * (K0 + 1) / T is an "
                          "integer; the band cannot be recovered",
                          0);
  }
  return PnsGrid{period, shift, window, band};
}

PnsSamples sample_pns(const SignalFn& sig, const PnsGrid& grid) {
  PnsSamples out;
  const auto k_first = static_cast<long>(std::ceil(grid.window.start / grid.period));
  const auto k_last =
      static_cast<long>(std::floor((grid.window.end - grid.shift) / grid.period));
  for (long k = k_first; k <= k_last; ++k) {
    const double ta = static_cast<double>(k) * grid.period;
    const double tb = ta + grid.shift;
    out.times.push_back(ta);
    out.values.push_back(sig(ta));
    out.times.push_back(tb);
    out.values.push_back(sig(tb));
  }
  return out;
}

PnsSamples sample_pns(const AnalyticSignal& sig, const PnsGrid& grid) {
  return sample_pns(sig.as_function(), grid);
}

void check_kernel_shift(double d, const BandSpec& band, std::size_t index) {
  const double half = 0.5 * band.bandwidth * d;
  const double s0 = std::sin(band.k0 * half);
  const double s1 = std::sin((band.k0 + 1) * half);
  if (std::abs(s0) < kSinTol || std::abs(s1) < kSinTol) {
    throw DegenerateShift("bandpass kernel: degenerate shift " + std::to_string(d) +
                              " at index " + std::to_string(index),
                          index);
  }
}

BandpassKernel::BandpassKernel(const BandSpec& band, double d, KernelForm form,
                               std::size_t index)
    : d_(d),
      bw_(band.bandwidth),
      wl_(band.omega_l),
      mid_(band.k0 * band.bandwidth - band.omega_l),
      phi0_(0.5 * band.k0 * band.bandwidth * d),
      phi1_(0.5 * (band.k0 + 1.0) * band.bandwidth * d),
      form_(form) {
  check_kernel_shift(d, band, index);
  inv_sin0_ = 1.0 / std::sin(phi0_);
  inv_sin1_ = 1.0 / std::sin(phi1_);
}

double BandpassKernel::operator()(double t) const {
  if (form_ == KernelForm::printed && t != 0.0) {
    const double bt = bw_ * t;
    return std::cos((wl_ + bw_) * t - phi1_) * inv_sin1_ / bt -
           std::cos(mid_ * t - phi1_) * inv_sin1_ / bt +
           std::cos(mid_ * t - phi0_) * inv_sin0_ / bt -
           std::cos(wl_ * t - phi0_) * inv_sin0_ / bt;
  }
  return cosine_difference(wl_ + bw_, mid_, phi1_, bw_, t) * inv_sin1_ +
         cosine_difference(mid_, wl_, phi0_, bw_, t) * inv_sin0_;
}

double kernel_gbp(double t, double d, const BandSpec& band, KernelForm form) {
  return BandpassKernel(band, d, form)(t);
}

double kernel_gbp_indexed(double t, double d, const BandSpec& band, bool odd,
                          KernelForm form) {
  const BandpassKernel g(band, d, form);
  return odd ? g.reflected(t) : g(t);
}

namespace {

double reconstruct_with(const BandpassKernel& g, const PnsSamples& samples, double t) {
  double sum = 0.0;
  const std::size_t n = samples.times.size();
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    const double rel = t - samples.times[i];
    sum += samples.values[i] * g(rel);
    sum += samples.values[i + 1] * g.reflected(rel);
  }
  return sum;
}

}  // namespace

double reconstruct_pns(const PnsSamples& samples, const PnsGrid& grid, double t) {
  return reconstruct_with(BandpassKernel(grid.band, grid.shift), samples, t);
}

std::vector<double> reconstruct_pns_grid(const PnsSamples& samples,
                                         const PnsGrid& grid,
                                         std::span<const double> ts, Exec exec) {
  const BandpassKernel g(grid.band, grid.shift);
  std::vector<double> out(ts.size());
  const auto n = static_cast<long>(ts.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      out[i] = reconstruct_with(g, samples, ts[i]);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      out[i] = reconstruct_with(g, samples, ts[i]);
    }
  }
  return out;
}

}  // namespace tembp
