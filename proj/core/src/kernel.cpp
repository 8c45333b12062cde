#include "memoryflow/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "memoryflow/errors.hpp"
#include "memoryflow/incomplete_gamma.hpp"
#include "memoryflow/quadrature.hpp"

namespace memoryflow {

using cd = std::complex<double>;

namespace {

void validate_fractional(double alpha, double delta) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw config_error("kernel alpha must lie in (0, 1), got " + std::to_string(alpha));
  if (!(delta > 0.0))
    throw config_error("kernel delta must be positive, got " + std::to_string(delta));
}

// rho_TC / rho_NF, constant in s.
double truncated_caputo_factor(double alpha, double delta) {
  return alpha * std::pow(delta, 1.0 - alpha) / std::tgamma(2.0 - alpha);
}

double interp_table(const std::vector<std::pair<double, double>>& table, double s) {
  if (s < table.front().first) return 0.0;
  auto it = std::upper_bound(table.begin(), table.end(), s,
                             [](double v, const std::pair<double, double>& p) {
                               return v < p.first;
                             });
  if (it == table.begin()) return 0.0;
  if (it == table.end()) return table.back().second;
  auto lo = *(it - 1);
  auto hi = *it;
  double t = (s - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

// (1 - e^{-z s}) / s, stable for small |z s|.
cd phi(cd z, double s) {
  cd w = z * s;
  if (std::abs(w) < 1e-6) return z * (1.0 - w / 2.0 + w * w / 6.0);
  return (1.0 - std::exp(-w)) / s;
}

template <class F>
cd cgk15(F&& f, double a, double b) {
  double c = 0.5 * (a + b);
  double hl = 0.5 * (b - a);
  cd sum = gk::wgk[7] * f(c);
  for (int j = 0; j < 7; ++j) {
    double dx = hl * gk::xgk[j];
    sum += gk::wgk[j] * (f(c - dx) + f(c + dx));
  }
  return sum * hl;
}

// Closed form for the NormalizedFractional symbol away from the regime gap:
// K(z) = (1-alpha) delta^(alpha-1) / alpha
//        * (z^alpha gamma_lower(1-alpha, z delta) - delta^(-alpha) (1 - e^{-z delta})).
cd fractional_symbol(double alpha, double delta, cd z) {
  cd w = z * delta;
  double aw = std::abs(w);
  if (aw < 1e-8) {
    double mu1 = (1.0 - alpha) * delta / (2.0 - alpha);
    double mu2 = (1.0 - alpha) * delta * delta / (3.0 - alpha);
    return z - z * z * (mu1 / 2.0) + z * z * z * (mu2 / 6.0);
  }
  double a = 1.0 - alpha;
  cd g;
  if (aw < 12.0) {
    g = lower_gamma_series(a, w);
  } else if (w.real() > 0.0) {
    g = std::tgamma(a) - upper_gamma_cf(a, w);
  } else if (aw >= 30.0) {
    g = std::tgamma(a) - upper_gamma_asymptotic(a, w);
  } else {
    return detail::symbol_quadrature(z, alpha, delta);
  }
  cd za = std::exp(alpha * std::log(z));
  double pref = (1.0 - alpha) * std::pow(delta, alpha - 1.0) / alpha;
  return pref * (za * g - std::pow(delta, -alpha) * (1.0 - std::exp(-w)));
}

cd tabulated_symbol(const KernelSpec& spec, cd z) {
  const auto& tb = spec.table;
  double az = std::abs(z);
  cd total = 0.0;
  for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
    double a = tb[i].first;
    double b = tb[i + 1].first;
    double width = b - a;
    int nphase = static_cast<int>(std::ceil(az * width / 0.5));
    int ncurve = static_cast<int>(std::ceil(4.0 * width / a));
    int nsub = std::clamp(std::max(nphase, ncurve), 1, 2000);
    double h = width / nsub;
    double f0 = tb[i].second;
    double slope = (tb[i + 1].second - f0) / width;
    cd prev = phi(z, a) * f0;
    for (int j = 1; j <= nsub; ++j) {
      double s = a + j * h;
      cd cur = phi(z, s) * (f0 + slope * (s - a));
      total += 0.5 * h * (prev + cur);
      prev = cur;
    }
  }
  return total;
}

}  // namespace

KernelSpec KernelSpec::normalized_fractional(double alpha, double delta) {
  validate_fractional(alpha, delta);
  return {KernelFamily::NormalizedFractional, alpha, delta, {}};
}

KernelSpec KernelSpec::truncated_caputo(double alpha, double delta) {
  validate_fractional(alpha, delta);
  return {KernelFamily::TruncatedCaputo, alpha, delta, {}};
}

KernelSpec KernelSpec::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2)
    throw config_error("tabulated kernel needs at least two samples");
  if (!(samples.front().first > 0.0))
    throw config_error("tabulated kernel abscissae must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i].first > samples[i - 1].first))
      throw config_error("tabulated kernel abscissae must be strictly increasing");
    if (samples[i].second < 0.0)
      throw config_error("tabulated kernel density must be nonnegative");
  }
  KernelSpec spec;
  spec.family = KernelFamily::Tabulated;
  spec.alpha = 0.0;
  spec.delta = samples.back().first;
  spec.table = std::move(samples);
  return spec;
}

KernelSpec load_kernel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open kernel table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw config_error("empty kernel table: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,rho")
    throw config_error("kernel table must start with header \"s,rho\": " + path);
  std::vector<std::pair<double, double>> samples;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw config_error(path + ":" + std::to_string(lineno) + ": expected \"s,rho\" row");
    try {
      samples.emplace_back(std::stod(a), std::stod(b));
    } catch (const std::exception&) {
      throw config_error(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  try {
    return KernelSpec::tabulated(std::move(samples));
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

double density(const KernelSpec& spec, double s) {
  if (!(s > 0.0)) throw std::domain_error("kernel density is defined for s > 0");
  if (s >= spec.delta) return 0.0;
  switch (spec.family) {
    case KernelFamily::NormalizedFractional:
      return (1.0 - spec.alpha) * std::pow(spec.delta, spec.alpha - 1.0) *
             std::pow(s, -spec.alpha);
    case KernelFamily::TruncatedCaputo:
      return spec.alpha / std::tgamma(1.0 - spec.alpha) * std::pow(s, -spec.alpha);
    case KernelFamily::Tabulated:
      return interp_table(spec.table, s);
  }
  return 0.0;
}

double mass(const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::NormalizedFractional:
      return 1.0;
    case KernelFamily::TruncatedCaputo:
      return truncated_caputo_factor(spec.alpha, spec.delta);
    case KernelFamily::Tabulated:
      return detail::tabulated_integral(spec, 0.0, spec.delta);
  }
  return 0.0;
}

double first_moment(const KernelSpec& spec) {
  double nf = (1.0 - spec.alpha) * spec.delta / (2.0 - spec.alpha);
  switch (spec.family) {
    case KernelFamily::NormalizedFractional:
      return nf;
    case KernelFamily::TruncatedCaputo:
      return truncated_caputo_factor(spec.alpha, spec.delta) * nf;
    case KernelFamily::Tabulated: {
      const auto& tb = spec.table;
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
        double f0 = tb[i].first * tb[i].second;
        double f1 = tb[i + 1].first * tb[i + 1].second;
        acc += 0.5 * (tb[i + 1].first - tb[i].first) * (f0 + f1);
      }
      return acc;
    }
  }
  return 0.0;
}

std::complex<double> symbol_K(const KernelSpec& spec, std::complex<double> z) {
  if (!(z.real() > 0.0))
    throw std::domain_error("symbol_K requires Re(z) > 0");
  return detail::symbol_unrestricted(spec, z);
}

namespace detail {

std::complex<double> symbol_unrestricted(const KernelSpec& spec,
                                         std::complex<double> z, double scale) {
  switch (spec.family) {
    case KernelFamily::NormalizedFractional:
      return scale * fractional_symbol(spec.alpha, spec.delta, z);
    case KernelFamily::TruncatedCaputo:
      return scale * truncated_caputo_factor(spec.alpha, spec.delta) *
             fractional_symbol(spec.alpha, spec.delta, z);
    case KernelFamily::Tabulated:
      return scale * tabulated_symbol(spec, z);
  }
  return 0.0;
}

std::complex<double> symbol_quadrature(std::complex<double> z, double alpha,
                                       double delta) {
  double az = std::abs(z);
  double sstar = std::min(delta, 1.0 / std::max(az, 1e-300));
  // integral over (0, s*) of (1 - e^{-zs}) s^{-1-alpha}, term by term
  cd head = 0.0;
  cd c = 1.0;
  cd zs = z * sstar;
  for (int n = 1; n <= 70; ++n) {
    c *= zs / static_cast<double>(n);
    cd term = c / (n - alpha);
    head += (n % 2 == 1) ? term : -term;
    if (std::abs(term) < 1e-18 * std::abs(head)) break;
  }
  cd total = head * std::pow(sstar, -alpha);
  auto f = [&](double s) { return phi(z, s) * std::pow(s, -alpha); };
  double lo = sstar;
  while (lo < delta * (1.0 - 1e-15)) {
    double hi = std::min(delta, 2.0 * lo);
    int nsub = std::max(1, static_cast<int>(std::ceil(az * (hi - lo) / 3.0)));
    double h = (hi - lo) / nsub;
    for (int j = 0; j < nsub; ++j)
      total += cgk15(f, lo + j * h, lo + (j + 1) * h);
    lo = hi;
  }
  return (1.0 - alpha) * std::pow(delta, alpha - 1.0) * total;
}

double tabulated_integral(const KernelSpec& spec, double a, double b) {
  const auto& tb = spec.table;
  a = std::max(a, tb.front().first);
  b = std::min(b, tb.back().first);
  if (!(b > a)) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
    double lo = std::max(a, tb[i].first);
    double hi = std::min(b, tb[i + 1].first);
    if (!(hi > lo)) continue;
    acc += 0.5 * (hi - lo) * (interp_table(tb, lo) + interp_table(tb, hi));
  }
  return acc;
}

}  // namespace detail

}  // namespace memoryflow
