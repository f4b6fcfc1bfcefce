#pragma once

#include <span>
#include <vector>

#include "tembp/parallel.hpp"
#include "tembp/signals.hpp"
#include "tembp/tem.hpp"

namespace tembp {

/// Two-channel periodic nonuniform sampling grid: channel A at kT,
/// channel B at kT + shift.
struct PnsGrid {
  double period = 0.0;
  double shift = 0.0;
  TimeWindow window;
  BandSpec band;
};

/// Builds a grid with period 2 pi / B. Throws InvalidInput unless
/// 0 < shift < period, and DegenerateShift when shift * K0 / T or
/// shift * (K0 + 1) / T is within 1e-9 of an integer.
PnsGrid make_pns_grid(const BandSpec& band, double shift, TimeWindow window);

/// Interleaved samples x(kT), x(kT + d), x((k+1)T), ...
struct PnsSamples {
  std::vector<double> times;
  std::vector<double> values;
};

PnsSamples sample_pns(const SignalFn& sig, const PnsGrid& grid);
PnsSamples sample_pns(const AnalyticSignal& sig, const PnsGrid& grid);

/// `product` evaluates each cosine difference as a product of sines, which is
/// exact through the removable singularity at t = 0. `printed` sums the four
/// cosine quotients directly and is kept as an independent algebraic route.
enum class KernelForm { product, printed };

/// Throws DegenerateShift if sin(K0 B d / 2) or sin((K0 + 1) B d / 2) is
/// below 1e-9 in magnitude.
void check_kernel_shift(double d, const BandSpec& band, std::size_t index = 0);

/// g_BP(., d) with its shift-dependent constants precomputed.
class BandpassKernel {
 public:
  BandpassKernel(const BandSpec& band, double d, KernelForm form = KernelForm::product,
                 std::size_t index = 0);

  double operator()(double t) const;
  /// Reflected form g_BP(d - t, d) used for odd (channel B) samples.
  double reflected(double t) const { return (*this)(d_ - t); }
  double shift() const { return d_; }

 private:
  double d_;
  double bw_;
  double wl_;
  double mid_;
  double phi0_;
  double phi1_;
  double inv_sin0_;
  double inv_sin1_;
  KernelForm form_;
};

/// Bandpass interpolation kernel g_BP(t, d) for the band's omega_l, B and K0.
double kernel_gbp(double t, double d, const BandSpec& band,
                  KernelForm form = KernelForm::product);

/// Parity-selected kernel: g_BP(t, d) for even sample indices and the
/// reflected g_BP(d - t, d) for odd ones, with t measured from the pair's
/// even (channel A) sample.
double kernel_gbp_indexed(double t, double d, const BandSpec& band, bool odd,
                          KernelForm form = KernelForm::product);

/// Truncated interpolation series over all available samples.
double reconstruct_pns(const PnsSamples& samples, const PnsGrid& grid, double t);

std::vector<double> reconstruct_pns_grid(const PnsSamples& samples,
                                         const PnsGrid& grid,
                                         std::span<const double> ts,
                                         Exec exec = Exec::serial);

}  // namespace tembp
