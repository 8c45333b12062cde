#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace memoryflow {

// 15-point Gauss-Kronrod nodes and weights on [-1, 1] (upper half; symmetric).
namespace gk {
inline constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};
}  // namespace gk

struct PanelEstimate {
  double value;
  double error;  // |Kronrod - Gauss| scaled by the half width
};

// One Gauss-Kronrod panel over [a, b].
template <class F>
PanelEstimate gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = gk::wgk[7] * fc;
  double resg = gk::wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * gk::xgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    resk += gk::wgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += gk::wg[j / 2] * (f1 + f2);
  }
  return {resk * h, std::abs(resk - resg) * std::abs(h)};
}

struct AdaptiveResult {
  double value;
  double error;
  int panels;
  bool converged;
};

// Globally adaptive Gauss-Kronrod: repeatedly bisects the panel with the
// largest error estimate until the summed estimate drops below abs_tol.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::vector<std::pair<double, double>> seeds,
                                  double abs_tol, int max_panels = 60000);

// Convenience wrapper over a single interval.
AdaptiveResult integrate(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, int max_panels = 60000);

}  // namespace memoryflow
