#include "memoryflow/incomplete_gamma.hpp"

#include <cmath>

namespace memoryflow {

using cd = std::complex<double>;

cd lower_gamma_series(double a, cd w) {
  // gamma(a, w) = w^a e^{-w} sum_{n>=0} w^n / (a (a+1) ... (a+n))
  cd s = 1.0 / a;
  cd term = s;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= w / ap;
    s += term;
    if (std::abs(term) < 1e-17 * std::abs(s)) break;
  }
  return std::exp(-w + a * std::log(w)) * s;
}

cd upper_gamma_cf(double a, cd w) {
  constexpr double tiny = 1e-300;
  cd b = w + 1.0 - a;
  cd c = 1.0 / tiny;
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 1; i < 300; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cd delt = d * c;
    h *= delt;
    if (std::abs(delt - 1.0) < 1e-15) break;
  }
  return std::exp(-w + a * std::log(w)) * h;
}

cd upper_gamma_asymptotic(double a, cd w) {
  // Gamma(a, w) = w^{a-1} e^{-w} sum_{n>=0} (a-1)(a-2)...(a-n) / w^n
  cd s = 1.0;
  cd term = 1.0;
  for (int n = 1; n < 40; ++n) {
    term *= (a - n) / w;
    s += term;
    if (std::abs(term) < 1e-17 * std::abs(s)) break;
  }
  return std::exp(-w + (a - 1.0) * std::log(w)) * s;
}

}  // namespace memoryflow
