#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace tembp {

/// Outcome of an adaptive integration. `error` is the summed panel-halving
/// estimate; `converged` is false when the subdivision budget ran out first.
struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  std::size_t panels = 0;
};

inline constexpr std::size_t kPanelOrder = 10;

struct PanelRule {
  std::array<double, kPanelOrder> nodes;    // on [-1, 1]
  std::array<double, kPanelOrder> weights;
};

/// Gauss-Legendre nodes and weights of order kPanelOrder.
const PanelRule& gauss_legendre_rule();

template <class F>
double integrate_panel(const F& f, double a, double b) {
  const PanelRule& rule = gauss_legendre_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kPanelOrder; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

/// Adaptive bisection on a Gauss-Legendre panel. A panel is accepted when
/// its two halves agree with the whole to within the panel's share of `tol`
/// (absolute). Panels are processed left to right, so the result is a
/// deterministic function of the inputs.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double tol,
                              int max_depth = 48,
                              std::size_t max_panels = 20000) {
  QuadResult out;
  if (!(b > a)) {
    return out;
  }
  struct Pending {
    double a, b, whole, tol;
    int depth;
  };
  std::vector<Pending> stack;
  stack.push_back({a, b, integrate_panel(f, a, b), tol, 0});
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double left = integrate_panel(f, p.a, m);
    const double right = integrate_panel(f, m, p.b);
    const double fine = left + right;
    const double err = std::abs(fine - p.whole);
    const double roundoff = 64.0 * eps * (std::abs(left) + std::abs(right));
    const bool budget_hit =
        p.depth >= max_depth || out.panels + stack.size() + 2 > max_panels;
    if (err <= p.tol || err <= roundoff || budget_hit) {
      if (err > p.tol && err > roundoff) {
        out.converged = false;
      }
      out.value += fine;
      out.error += err;
      ++out.panels;
      continue;
    }
    // Right half first so the left half is popped (and summed) first.
    stack.push_back({m, p.b, right, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, m, left, 0.5 * p.tol, p.depth + 1});
  }
  return out;
}

}  // namespace tembp
