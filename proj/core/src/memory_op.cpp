#include "memoryflow/memory_op.hpp"

#include <cmath>
#include <string>

#include "memoryflow/errors.hpp"

namespace memoryflow {

namespace {

// k^(1-alpha) - (k-1)^(1-alpha) without subtractive cancellation.
double power_increment(double k, double beta) {
  return -std::pow(k, beta) * std::expm1(beta * std::log1p(-1.0 / k));
}

}  // namespace

MemoryWeights build_weights(const KernelSpec& spec, double tau) {
  if (!(tau > 0.0)) throw config_error("tau must be positive");
  double ratio = spec.delta / tau;
  auto M = static_cast<long long>(std::llround(ratio));
  if (M < 1 || std::abs(ratio - static_cast<double>(M)) > 1e-12 * ratio) {
    long long nearest = std::max(1ll, M);
    throw config_error("tau must divide delta; nearest admissible tau = " +
                       std::to_string(spec.delta / static_cast<double>(nearest)));
  }

  MemoryWeights mw;
  mw.tau = tau;
  mw.M = static_cast<int>(M);
  mw.w.resize(mw.M);

  switch (spec.family) {
    case KernelFamily::NormalizedFractional:
    case KernelFamily::TruncatedCaputo: {
      double beta = 1.0 - spec.alpha;
      double pref = std::pow(spec.delta, spec.alpha - 1.0) * std::pow(tau, -spec.alpha);
      if (spec.family == KernelFamily::TruncatedCaputo)
        pref = spec.alpha / std::tgamma(1.0 - spec.alpha) * std::pow(tau, -spec.alpha) / beta;
      for (int k = 1; k <= mw.M; ++k)
        mw.w[k - 1] = pref * power_increment(k, beta) / k;
      break;
    }
    case KernelFamily::Tabulated: {
      for (int k = 1; k <= mw.M; ++k)
        mw.w[k - 1] = detail::tabulated_integral(spec, (k - 1) * tau, k * tau) / (k * tau);
      break;
    }
  }

  double sum = 0.0;
  for (int k = mw.M; k >= 1; --k) sum += mw.w[k - 1];
  mw.W0 = sum;
  return mw;
}

double apply(const MemoryWeights& weights, double current,
             std::span<const double> history) {
  if (history.size() < static_cast<std::size_t>(weights.M))
    throw config_error("apply needs M history values");
  double acc = 0.0;
  for (int k = weights.M; k >= 1; --k) acc += weights.w[k - 1] * history[k - 1];
  return weights.W0 * current - acc;
}

double c_coefficient(double alpha, double delta) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw config_error("alpha must lie in (0, 1)");
  if (!(delta > 0.0)) throw config_error("delta must be positive");

  double beta = 1.0 - alpha;
  const int K = 40000;
  double sum = 1.0;  // k = 1 term: (1^beta - 0^beta) / 1
  for (int k = 2; k <= K; ++k) sum += power_increment(k, beta) / k;

  // tail of sum_{k>K} (k^beta - (k-1)^beta)/k via the expansion
  // (1-alpha)[k^(-1-a) + (a/2)k^(-2-a) + (a(1+a)/6)k^(-3-a)] and
  // Euler-Maclaurin for each power sum; remainder is O(K^(-3-a)).
  auto power_tail = [&](double p) {
    double x = K + 1.0;
    return std::pow(x, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(x, -p) +
           p / 12.0 * std::pow(x, -p - 1.0);
  };
  sum += beta * (power_tail(1.0 + alpha) + 0.5 * alpha * power_tail(2.0 + alpha) +
                 alpha * (1.0 + alpha) / 6.0 * power_tail(3.0 + alpha));

  return std::pow(delta, alpha - 1.0) * sum;
}

}  // namespace memoryflow
