#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace memoryflow {

enum class KernelFamily { NormalizedFractional, TruncatedCaputo, Tabulated };

// Memory kernel rho_delta(s): a nonnegative weight over past time lags
// s in (0, delta). NormalizedFractional is (1-alpha) delta^(alpha-1) s^(-alpha)
// and integrates to exactly 1; TruncatedCaputo is (alpha/Gamma(1-alpha)) s^(-alpha);
// Tabulated interpolates CSV samples linearly (lower-accuracy path, ~1e-4).
struct KernelSpec {
  KernelFamily family{KernelFamily::NormalizedFractional};
  double alpha{0.5};  // exponent in (0,1); ignored for Tabulated
  double delta{1.0};  // memory horizon, > 0
  std::vector<std::pair<double, double>> table;  // (s, rho) samples, Tabulated only

  static KernelSpec normalized_fractional(double alpha, double delta);
  static KernelSpec truncated_caputo(double alpha, double delta);
  // delta is taken from the last sample abscissa.
  static KernelSpec tabulated(std::vector<std::pair<double, double>> samples);
};

// Two-column CSV with required header "s,rho" and strictly increasing s > 0.
KernelSpec load_kernel_csv(const std::string& path);

// rho_delta(s); zero for s >= delta. Throws std::domain_error for s <= 0.
double density(const KernelSpec& spec, double s);

// integral of rho over (0, delta); analytic for the fractional families.
double mass(const KernelSpec& spec);

// integral of s rho(s) over (0, delta).
double first_moment(const KernelSpec& spec);

// Frequency-domain multiplier K(z) = integral (1 - e^{-zs}) s^{-1} rho(s) ds.
// Defined for Re(z) > 0; throws std::domain_error otherwise.
std::complex<double> symbol_K(const KernelSpec& spec, std::complex<double> z);

namespace detail {

// K(z) without the half-plane restriction (the integrand is entire in z) and
// with an optional constant kernel scale sigma: K_{sigma rho} = sigma K_rho.
// Contour inversion needs this on Re(z) <= 0 nodes.
std::complex<double> symbol_unrestricted(const KernelSpec& spec,
                                         std::complex<double> z,
                                         double scale = 1.0);

// Direct quadrature of the defining integral for the fractional families:
// truncated Taylor series on (0, s*) so the s^{-alpha} endpoint integrates in
// closed form, phase-limited Gauss-Kronrod panels on (s*, delta).
std::complex<double> symbol_quadrature(std::complex<double> z, double alpha,
                                       double delta);

// Exact integral of the tabulated piecewise-linear density over [a, b].
double tabulated_integral(const KernelSpec& spec, double a, double b);

}  // namespace detail

}  // namespace memoryflow
