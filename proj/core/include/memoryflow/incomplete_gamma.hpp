#pragma once

#include <complex>

namespace memoryflow {

// Incomplete gamma functions of real order a on complex arguments, split into
// the evaluation regimes used by the kernel symbol. All three use the
// principal branch of w^a.

// Lower gamma(a, w) by the ascending series; reliable for |w| < ~12.
std::complex<double> lower_gamma_series(double a, std::complex<double> w);

// Upper Gamma(a, w) by the Lentz continued fraction; requires Re(w) > 0.
std::complex<double> upper_gamma_cf(double a, std::complex<double> w);

// Upper Gamma(a, w) by the divergent asymptotic series; requires |w| >= ~30.
std::complex<double> upper_gamma_asymptotic(double a, std::complex<double> w);

}  // namespace memoryflow
