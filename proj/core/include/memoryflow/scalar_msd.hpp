#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "memoryflow/memory_op.hpp"

namespace memoryflow {

enum class HistoryKind { Zero, AffineScaled, Step, Tabulated };

// Prescribed values of the unknown on t <= 0. AffineScaled(k) is k(1+2t),
// the family on which the discrete operator is exact. Step(height, a, b)
// is height on [a, b) with a < b <= 0, zero elsewhere. Tabulated
// interpolates (t, value) samples linearly and is zero outside them.
struct HistorySignal {
  HistoryKind kind{HistoryKind::Zero};
  double scale{0.0};
  double height{0.0};
  double t_on{0.0};
  double t_off{0.0};
  std::vector<std::pair<double, double>> table;

  static HistorySignal zero();
  static HistorySignal affine_scaled(double scale);
  static HistorySignal step(double height, double t_on, double t_off);
  static HistorySignal tabulated(std::vector<std::pair<double, double>> samples);

  double operator()(double t) const;

  // newest-first samples at t = -tau, ..., -M tau
  std::vector<double> sample(int M, double tau) const;

  std::string describe() const;
};

// Uniform-grid trajectory: values[n] holds the solution at t = n tau.
// alpha and delta are carried as metadata for downstream diagnostics.
struct TimeSeries {
  double tau{0.0};
  std::vector<double> values;
  double alpha{0.0};
  double delta{0.0};
  std::string history;

  double time(std::size_t n) const { return static_cast<double>(n) * tau; }
};

// Marches the implicit scheme for G_tau m = rhs with prescribed history:
//   m^n = (rhs(t_n) + sum_k w_k m^{n-k}) / W0,
// where negative indices read from the history signal. Positive weights make
// the recursion unconditionally stable; affine data is reproduced exactly.
TimeSeries solve_scalar(const MemoryWeights& weights, const HistorySignal& history,
                        const std::function<double(double)>& rhs, double T);

// Centered log-log slope (log m(t_{n+1}) - log m(t_{n-1})) / (log t_{n+1} - log t_{n-1}).
// Endpoint nodes and nodes touching m <= 0 or t <= 0 are flagged NaN.
TimeSeries local_slope(const TimeSeries& series);

struct CrossoverResult {
  bool found{false};
  double t{0.0};
};

// First time the moving-average-smoothed slope rises through the threshold,
// located by linear interpolation. Default threshold (1+alpha)/2 is the
// midpoint between the early t^alpha and late t^1 growth exponents.
CrossoverResult crossover_time(const TimeSeries& series, double alpha,
                               int smooth_window = 5, double threshold = -1.0);

}  // namespace memoryflow
