#include "memoryflow/freespace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "memoryflow/errors.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/quadrature.hpp"

namespace memoryflow {

using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCauchyNodes = 24;
constexpr int kIbpTerms = 8;

struct ScaledSymbol {
  const KernelSpec* spec;
  double scale;
  cd K(cd z) const { return detail::symbol_unrestricted(*spec, z, scale); }
};

// alpha and the large-z coefficient of K, used only to size error budgets.
// Tabulated kernels get a generic surrogate; their values still come from
// the true symbol.
struct LineBudget {
  double alpha;
  double C;
};

LineBudget budget_for(const KernelSpec& spec, double scale) {
  double a = spec.family == KernelFamily::Tabulated ? 0.5 : spec.alpha;
  double C = std::tgamma(2.0 - a) * std::pow(spec.delta, a - 1.0) / a;
  return {a, scale * std::max(mass(spec), 1e-6) * C};
}

// g(y) = uhat(s + iy) and its first derivatives at height Y, via a trapezoid
// Cauchy integral on a circle of radius 0.6 s (stays inside Re z > 0).
template <class Uhat>
std::array<cd, kIbpTerms> cauchy_derivatives(const Uhat& uhat, double s, double Y) {
  double rc = 0.6 * s;
  cd zc(s, Y);
  std::array<cd, kCauchyNodes> vals;
  for (int j = 0; j < kCauchyNodes; ++j) {
    double ph = 2.0 * kPi * j / kCauchyNodes;
    vals[j] = uhat(zc + rc * std::polar(1.0, ph));
  }
  std::array<cd, kIbpTerms> g;
  double fact = 1.0;
  double rpow = 1.0;
  cd ik(1.0, 0.0);
  const cd I(0.0, 1.0);
  for (int k = 0; k < kIbpTerms; ++k) {
    cd acc = 0.0;
    for (int j = 0; j < kCauchyNodes; ++j) {
      double ph = 2.0 * kPi * j / kCauchyNodes;
      acc += vals[j] * std::polar(1.0, -k * ph);
    }
    g[k] = acc / static_cast<double>(kCauchyNodes) / rpow * fact * ik;
    fact *= (k + 1);
    rpow *= rc;
    ik *= I;
  }
  return g;
}

struct LineResult {
  double value;
  double est;
};

// Vertical-line route for t below the handoff: truncated Bromwich integral
//   u = e^gamma/pi * (int_0^Y Re[e^{iyt} g(y)] dy + tail),
// head by globally adaptive Gauss-Kronrod with seed panels capped at a
// quarter oscillation period, tail by eight integration-by-parts boundary
// terms. The junction Y grows until the IBP remainder plus the e^{-z delta}
// echo envelope (resonant at t = delta) fit the budget.
LineResult invert_line(const ScaledSymbol& sym, const LineBudget& bud, double delta,
                       double ax, double t, double tol) {
  bool in_window = t > 0.5 * delta;
  double gamma = in_window ? 12.0 : 9.0;
  double s = gamma / t;

  auto uhat = [&](cd z) {
    cd K = sym.K(z);
    cd r = std::sqrt(K);
    return r * std::exp(-ax * r) / (2.0 * z);
  };

  cd r0 = std::sqrt(sym.K(cd(s, 0.0)));
  if (ax * r0.real() > 700.0) return {0.0, 0.0};

  double budget = tol * kPi * std::exp(-gamma);
  double tail_budget = 0.25 * budget;
  double head_budget = 0.5 * budget;

  double sqC = std::sqrt(bud.C);
  double echo_pref =
      (1.0 - bud.alpha) / (4.0 * delta * delta * sqC) * std::exp(-s * delta);
  double echo_ibp = std::pow(std::max(1.0, delta / t), kIbpTerms) / t;

  double Y = 4.0 * s;
  std::array<cd, kIbpTerms> table{};
  double rem = 0.0;
  bool found = false;
  for (int iter = 0; iter < 120; ++iter) {
    table = cauchy_derivatives(uhat, s, Y);
    double rem_power = std::abs(table[kIbpTerms - 1]) / std::pow(t, kIbpTerms);
    double res = Y / (1.0 + 0.5 * bud.alpha);
    if (t != delta) res = std::min(res, 1.0 / std::abs(t - delta));
    double rem_echo = echo_pref *
                      std::pow(s * s + Y * Y, -1.0 - 0.25 * bud.alpha) *
                      (res + echo_ibp);
    rem = rem_power + rem_echo;
    if (rem < tail_budget) {
      found = true;
      break;
    }
    Y *= 1.45;
  }
  if (!found)
    throw numerics_error("contour inversion found no integration-by-parts junction");

  auto f = [&](double y) {
    return (std::polar(1.0, y * t) * uhat(cd(s, y))).real();
  };

  double qper = kPi / (2.0 * t);
  std::vector<std::pair<double, double>> seeds;
  double y0 = std::min(4.0 * s, Y);
  for (int i = 0; i < 16; ++i)
    seeds.emplace_back(y0 * i / 16.0, y0 * (i + 1) / 16.0);
  double y = y0;
  while (y < Y) {
    double ynext = std::min(Y, y + std::min(std::max(0.5 * y, qper * 1e-9), qper));
    seeds.emplace_back(y, ynext);
    y = ynext;
  }
  auto head = integrate_adaptive(f, seeds, head_budget);

  cd it(0.0, t);
  cd tail_c = 0.0;
  cd p = it;
  double sign = 1.0;
  for (int k = 0; k < kIbpTerms; ++k) {
    tail_c -= sign * table[k] / p;
    sign = -sign;
    p *= it;
  }
  tail_c *= std::polar(1.0, Y * t);

  double pref = std::exp(gamma) / kPi;
  return {pref * (head.value + tail_c.real()), pref * (head.error + rem)};
}

// Hyperbolic contour z = mu (1 + sin(iu - angle)) with midpoint nodes and
// conjugate-pair reduction to the imaginary part.
template <class F>
double hyperbola_sum(const F& func, double t, int N, const InversionContour& c) {
  double sphi = std::sin(c.angle);
  double mu_t = c.vertex / (1.0 - sphi);
  double mu = mu_t / t;
  double umax = std::acosh((1.0 + c.truncation / mu_t) / sphi);
  double h = umax / N;
  double acc = 0.0;
  for (int k = 0; k < N; ++k) {
    double u = (k + 0.5) * h;
    cd iu(0.0, u);
    cd z = mu * (1.0 + std::sin(iu - c.angle));
    cd dz = mu * cd(0.0, 1.0) * std::cos(iu - c.angle);
    acc += (std::exp(z * t) * func(z) * dz).imag();
  }
  return h / kPi * acc;
}

InvertResult finalize(double value, double est) {
  InvertResult r{value, est, false};
  r.warning = est > std::max(1e-6 * std::abs(value), 1e-12);
  return r;
}

double require_alpha(const KernelSpec& spec, const char* what) {
  if (spec.family == KernelFamily::Tabulated)
    throw config_error(std::string(what) + " needs a fractional kernel family");
  return spec.alpha;
}

}  // namespace

std::complex<double> hat_u(const KernelSpec& spec, double x, std::complex<double> z) {
  cd K = symbol_K(spec, z);
  cd r = std::sqrt(K);
  return r * std::exp(-std::abs(x) * r) / (2.0 * z);
}

namespace detail {

InvertResult invert_scaled(const KernelSpec& spec, double x, double t,
                           const InversionContour& contour, double kernel_scale) {
  if (!(t > 0.0)) throw config_error("inversion requires t > 0");
  ScaledSymbol sym{&spec, kernel_scale};
  double ax = std::abs(x);
  if (t >= contour.handoff * spec.delta) {
    auto uh = [&](cd z) {
      cd K = sym.K(z);
      cd r = std::sqrt(K);
      return r * std::exp(-ax * r) / (2.0 * z);
    };
    double v = hyperbola_sum(uh, t, contour.n_q, contour);
    int coarse = std::max(24, 3 * contour.n_q / 4);
    double vc = hyperbola_sum(uh, t, coarse, contour);
    return finalize(v, std::abs(v - vc));
  }
  double tol = contour.line_tol > 0.0
                   ? contour.line_tol
                   : (t <= 0.5 * spec.delta ? 1e-8 : 5e-7);
  auto lr = invert_line(sym, budget_for(spec, kernel_scale), spec.delta, ax, t, tol);
  return finalize(lr.value, lr.est);
}

}  // namespace detail

InvertResult invert(const KernelSpec& spec, double x, double t,
                    const InversionContour& contour) {
  return detail::invert_scaled(spec, x, t, contour, 1.0);
}

std::pair<double, double> kernel_scaling_check(const KernelSpec& spec, double sigma,
                                               double x, double t,
                                               const InversionContour& contour) {
  if (!(sigma > 0.0)) throw config_error("kernel scale sigma must be positive");
  InversionContour c = contour;
  if (c.line_tol == 0.0) c.line_tol = 1e-7;
  double scaled = detail::invert_scaled(spec, x, t, c, sigma).value;
  double mapped = detail::invert_scaled(spec, x / std::sqrt(sigma), t, c, 1.0).value;
  return {scaled, mapped};
}

TailFit tail_fit(const KernelSpec& spec, double t, const InversionContour& contour) {
  double alpha = require_alpha(spec, "tail_fit");
  double u0 = invert(spec, 0.0, t, contour).value;
  if (!(u0 > 0.0)) return {};

  double cdel = std::sqrt(mass(spec)) * TailAsymptote::from(alpha, spec.delta).c_delta;
  double lam0 = cdel * std::pow(t, -0.5 * alpha);
  double xa = 9.21 / lam0;

  InversionContour first = contour;
  if (first.line_tol == 0.0) first.line_tol = 1e-10;

  std::vector<double> xs, us;
  for (double x = 0.8 * xa; x <= 6.0 * xa && us.size() < 60; x += xa / 12.0) {
    double v = invert(spec, x, t, first).value;
    if (std::abs(v) < 1e-7) {
      InversionContour fine = contour;
      fine.line_tol = std::max(1e-3 * std::abs(v), 1e-15);
      v = invert(spec, x, t, fine).value;
    }
    if (!(v > 0.0)) break;
    double ratio = v / u0;
    if (ratio > 1e-4) continue;
    if (ratio < 1e-10) break;
    xs.push_back(x);
    us.push_back(v);
  }
  if (xs.size() < 8)
    return {false, 0.0, static_cast<int>(xs.size())};
  return {true, fit_stretch_exponent(xs, us), static_cast<int>(xs.size())};
}

double fit_stretch_exponent(const std::vector<double>& xs, const std::vector<double>& us) {
  if (xs.size() != us.size() || xs.size() < 3)
    throw config_error("stretch fit needs at least 3 matched samples");
  auto n = static_cast<double>(xs.size());
  std::vector<double> ly(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (!(us[i] > 0.0)) throw config_error("stretch fit needs positive values");
    ly[i] = std::log(us[i]);
  }
  double best_c = 1.0;
  double best_ss = std::numeric_limits<double>::infinity();
  for (double c = 1.0; c <= 2.5 + 1e-9; c += 0.005) {
    double sv = 0.0, svv = 0.0, sy = 0.0, svy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double v = std::pow(xs[i], c);
      sv += v;
      svv += v * v;
      sy += ly[i];
      svy += v * ly[i];
    }
    double det = n * svv - sv * sv;
    if (std::abs(det) < 1e-30) continue;
    double slope = (n * svy - sv * sy) / det;
    double icept = (sy - slope * sv) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double r = ly[i] - (icept + slope * std::pow(xs[i], c));
      ss += r * r;
    }
    if (ss < best_ss) {
      best_ss = ss;
      best_c = c;
    }
  }
  return best_c;
}

double transform_mode(const KernelSpec& spec, double xi, double t,
                      const InversionContour& contour) {
  if (!(t > 0.0)) throw config_error("transform_mode requires t > 0");
  double xi2 = xi * xi;
  if (t >= contour.handoff * spec.delta) {
    auto F = [&](cd z) {
      cd K = detail::symbol_unrestricted(spec, z);
      return K / (z * (K + xi2));
    };
    return hyperbola_sum(F, t, contour.n_q, contour);
  }
  // short-time fallback: march the discrete mode recursion with unit history
  MemoryWeights w = build_weights(spec, spec.delta / 512.0);
  auto n = std::max<long long>(1, std::llround(t / w.tau));
  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  for (long long m = 0; m <= n; ++m) {
    double acc = 0.0;
    for (int k = w.M; k >= 1; --k) {
      double past = (k <= m) ? vals[m - k] : 1.0;
      acc += w.w[k - 1] * past;
    }
    vals[m] = acc / (w.W0 + xi2);
  }
  return vals[n];
}

int spectral_decay_check(const KernelSpec& spec, double t, double xi_max,
                         const InversionContour& contour) {
  double alpha = require_alpha(spec, "spectral_decay_check");
  if (!(xi_max > 0.0)) throw config_error("xi_max must be positive");
  const int n = 40;
  double ta = std::pow(t, alpha);
  std::vector<double> reg(n), val(n);
  for (int i = 0; i < n; ++i) {
    double xi = xi_max * (i + 1) / n;
    reg[i] = xi * xi * ta;
    val[i] = std::abs(transform_mode(spec, xi, t, contour));
  }
  // calibrate c/(1 + b xi^2 t^alpha) on even indices: for each b on a log
  // grid the tightest valid c is max |mode| (1 + b reg); keep the pair with
  // the least total slack
  double best_b = 0.0, best_c = 0.0;
  double best_slack = std::numeric_limits<double>::infinity();
  for (int ib = 0; ib <= 120; ++ib) {
    double b = std::pow(10.0, -3.0 + 6.0 * ib / 120.0);
    double c = 0.0;
    for (int i = 0; i < n; i += 2) c = std::max(c, val[i] * (1.0 + b * reg[i]));
    double slack = 0.0;
    for (int i = 0; i < n; i += 2) slack += c / (1.0 + b * reg[i]) - val[i];
    if (slack < best_slack) {
      best_slack = slack;
      best_b = b;
      best_c = c;
    }
  }
  int violations = 0;
  for (int i = 1; i < n; i += 2)
    if (val[i] > 1.1 * best_c / (1.0 + best_b * reg[i])) ++violations;
  return violations;
}

double profile_mass(const KernelSpec& spec, double t, const InversionContour& contour) {
  double u0 = invert(spec, 0.0, t, contour).value;
  if (!(u0 > 0.0)) throw numerics_error("mass quadrature: nonpositive center value");
  double dx = std::max(0.5, std::sqrt(2.0 * t));
  double x = dx;
  double prev = u0;
  double last = u0;
  while (x < 400.0) {
    last = invert(spec, x, t, contour).value;
    if (last < 3e-9 * u0) break;
    prev = last;
    x += dx;
  }
  double lam = (prev > 0.0 && last > 0.0 && last < prev)
                   ? std::log(prev / last) / dx
                   : 0.0;
  double tail = (lam > 0.0 && last > 0.0) ? last / lam : 0.0;

  auto f = [&](double xx) { return invert(spec, xx, t, contour).value; };
  std::vector<std::pair<double, double>> seeds;
  const int ns = 12;
  for (int i = 0; i < ns; ++i) seeds.emplace_back(x * i / ns, x * (i + 1) / ns);
  auto r = integrate_adaptive(f, seeds, 2e-7, 4000);
  return 2.0 * (r.value + tail);
}

TailAsymptote TailAsymptote::from(double alpha, double delta) {
  if (!(alpha > 0.0) || !(alpha < 1.0) || !(delta > 0.0))
    throw config_error("tail asymptote needs alpha in (0,1) and delta > 0");
  TailAsymptote ta;
  ta.a = (2.0 * alpha - 2.0) / (2.0 - alpha);
  ta.b = (2.0 - alpha) * std::pow(2.0, -2.0 / (2.0 - alpha)) *
         std::pow(alpha, alpha / (2.0 - alpha));
  ta.c = 2.0 / (2.0 - alpha);
  ta.c_delta = std::sqrt(std::tgamma(2.0 - alpha) * std::pow(delta, alpha - 1.0) / alpha);
  return ta;
}

double peak_asymptote_early(const KernelSpec& spec, double t) {
  double alpha = require_alpha(spec, "peak_asymptote_early");
  double C = mass(spec) * std::tgamma(2.0 - alpha) *
             std::pow(spec.delta, alpha - 1.0) / alpha;
  return std::sqrt(C) / (2.0 * std::tgamma(1.0 - 0.5 * alpha)) *
         std::pow(t, -0.5 * alpha);
}

double peak_asymptote_late(const KernelSpec& spec, double t) {
  return 1.0 / std::sqrt(4.0 * kPi * mass(spec) * t);
}

}  // namespace memoryflow
