#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "memoryflow/kernel.hpp"

namespace memoryflow {

// Laplace-inversion contour parameters. Two routes share this struct: a
// truncated vertical line with integration-by-parts tail closure for
// t <= handoff * delta (where the memory horizon makes the integrand ring),
// and a deformed hyperbolic contour z = (vertex/(1-sin angle)/t)(1+sin(iu-angle))
// truncated where Re(z t) = -truncation for larger t. line_tol = 0 picks the
// automatic budget (1e-8 below delta/2, 5e-7 inside the crossover window).
struct InversionContour {
  int n_q{64};
  double handoff{2.5};
  double vertex{11.0};
  double truncation{26.0};
  double angle{1.05};
  double line_tol{0.0};
};

// Laplace-domain fundamental solution sqrt(K) e^{-|x| sqrt(K)} / (2z) with the
// principal square root; requires Re(z) > 0.
std::complex<double> hat_u(const KernelSpec& spec, double x, std::complex<double> z);

struct InvertResult {
  double value{0.0};
  double est_error{0.0};
  bool warning{false};  // est_error above max(1e-6 |value|, 1e-12)
};

// u(x, t) of the free-space fundamental solution.
InvertResult invert(const KernelSpec& spec, double x, double t,
                    const InversionContour& contour = {});

// (u_{sigma rho}(x, t), u_rho(x / sqrt(sigma), t)): scaling the kernel by a
// constant only rescales space, so the two must agree.
std::pair<double, double> kernel_scaling_check(const KernelSpec& spec, double sigma,
                                               double x, double t,
                                               const InversionContour& contour = {});

struct TailFit {
  bool ok{false};
  double c{0.0};
  int points{0};
};

// Fits log u(x,t) = p - q x^c over the far-tail window (u between 1e-10 and
// 1e-4 of the peak) by scanning the stretch exponent c.
TailFit tail_fit(const KernelSpec& spec, double t, const InversionContour& contour = {});

// The scan-and-least-squares core of tail_fit, usable on any sampled decay.
double fit_stretch_exponent(const std::vector<double>& xs, const std::vector<double>& us);

// Fourier-mode value of the solution with unit history: inverts K/(z(K+xi^2)).
double transform_mode(const KernelSpec& spec, double xi, double t,
                      const InversionContour& contour = {});

// Fits c/(1 + b xi^2 t^alpha) through 1/|mode| on a training set of
// frequencies, then counts test-set violations of the bound with 10% slack.
int spectral_decay_check(const KernelSpec& spec, double t, double xi_max,
                         const InversionContour& contour = {});

// integral of u(., t) over the line, by adaptive quadrature of inversions
// plus an exponential extrapolation of the remaining tail.
double profile_mass(const KernelSpec& spec, double t,
                    const InversionContour& contour = {});

// Closed-form constants of the far-tail law u ~ A y^a exp(-b y^c) and the
// Laplace-domain decay rate c_delta.
struct TailAsymptote {
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double c_delta{0.0};

  static TailAsymptote from(double alpha, double delta);
};

// Two-regime peak laws: sqrt(C)/(2 Gamma(1-alpha/2)) t^(-alpha/2) with
// C the large-z symbol coefficient, and the Gaussian 1/sqrt(4 pi mass t).
double peak_asymptote_early(const KernelSpec& spec, double t);
double peak_asymptote_late(const KernelSpec& spec, double t);

namespace detail {

// invert with the symbol multiplied by a constant kernel scale.
InvertResult invert_scaled(const KernelSpec& spec, double x, double t,
                           const InversionContour& contour, double kernel_scale);

}  // namespace detail

}  // namespace memoryflow
