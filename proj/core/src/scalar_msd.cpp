#include "memoryflow/scalar_msd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "memoryflow/errors.hpp"

namespace memoryflow {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

HistorySignal HistorySignal::zero() { return {}; }

HistorySignal HistorySignal::affine_scaled(double scale) {
  HistorySignal h;
  h.kind = HistoryKind::AffineScaled;
  h.scale = scale;
  return h;
}

HistorySignal HistorySignal::step(double height, double t_on, double t_off) {
  if (!(t_on < t_off) || t_off > 0.0)
    throw config_error("step history needs t_on < t_off <= 0");
  HistorySignal h;
  h.kind = HistoryKind::Step;
  h.height = height;
  h.t_on = t_on;
  h.t_off = t_off;
  return h;
}

HistorySignal HistorySignal::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2)
    throw config_error("tabulated history needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw config_error("tabulated history times must be strictly increasing");
  HistorySignal h;
  h.kind = HistoryKind::Tabulated;
  h.table = std::move(samples);
  return h;
}

double HistorySignal::operator()(double t) const {
  switch (kind) {
    case HistoryKind::Zero:
      return 0.0;
    case HistoryKind::AffineScaled:
      return scale * (1.0 + 2.0 * t);
    case HistoryKind::Step:
      return (t >= t_on && t < t_off) ? height : 0.0;
    case HistoryKind::Tabulated: {
      if (t < table.front().first || t > table.back().first) return 0.0;
      auto it = std::upper_bound(table.begin(), table.end(), t,
                                 [](double v, const std::pair<double, double>& p) {
                                   return v < p.first;
                                 });
      if (it == table.begin()) return table.front().second;
      if (it == table.end()) return table.back().second;
      auto lo = *(it - 1);
      auto hi = *it;
      double s = (t - lo.first) / (hi.first - lo.first);
      return lo.second + s * (hi.second - lo.second);
    }
  }
  return 0.0;
}

std::vector<double> HistorySignal::sample(int M, double tau) const {
  std::vector<double> out(M);
  for (int k = 1; k <= M; ++k) out[k - 1] = (*this)(-k * tau);
  return out;
}

std::string HistorySignal::describe() const {
  char buf[128];
  switch (kind) {
    case HistoryKind::Zero:
      return "zero";
    case HistoryKind::AffineScaled:
      std::snprintf(buf, sizeof buf, "affine:%g", scale);
      return buf;
    case HistoryKind::Step:
      std::snprintf(buf, sizeof buf, "step:%g,%g,%g", height, t_on, t_off);
      return buf;
    case HistoryKind::Tabulated:
      std::snprintf(buf, sizeof buf, "tabulated:%zu", table.size());
      return buf;
  }
  return "";
}

TimeSeries solve_scalar(const MemoryWeights& weights, const HistorySignal& history,
                        const std::function<double(double)>& rhs, double T) {
  if (!(T > 0.0)) throw config_error("horizon T must be positive");
  const int M = weights.M;
  const double tau = weights.tau;
  auto steps = static_cast<std::size_t>(std::floor(T / tau * (1.0 + 1e-12)));

  std::vector<double> pre = history.sample(M, tau);

  TimeSeries out;
  out.tau = tau;
  out.history = history.describe();
  out.values.resize(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) {
    double acc = 0.0;
    for (int k = M; k >= 1; --k) {
      double past = (static_cast<std::size_t>(k) <= n)
                        ? out.values[n - k]
                        : pre[k - static_cast<int>(n) - 1];
      acc += weights.w[k - 1] * past;
    }
    out.values[n] = (rhs(n * tau) + acc) / weights.W0;
  }
  return out;
}

TimeSeries local_slope(const TimeSeries& series) {
  TimeSeries out = series;
  auto N = series.values.size();
  for (auto& v : out.values) v = kNaN;
  for (std::size_t n = 1; n + 1 < N; ++n) {
    double m0 = series.values[n - 1];
    double m1 = series.values[n + 1];
    double t0 = series.time(n - 1);
    if (!(m0 > 0.0) || !(m1 > 0.0) || !(t0 > 0.0)) continue;
    out.values[n] = (std::log(m1) - std::log(m0)) /
                    (std::log(series.time(n + 1)) - std::log(t0));
  }
  return out;
}

CrossoverResult crossover_time(const TimeSeries& series, double alpha,
                               int smooth_window, double threshold) {
  if (smooth_window < 1 || smooth_window % 2 == 0)
    throw config_error("smoothing window must be odd and positive");
  if (threshold < 0.0) threshold = 0.5 * (1.0 + alpha);

  TimeSeries slope = local_slope(series);
  const auto& s = slope.values;
  auto N = s.size();
  int half = smooth_window / 2;

  std::vector<double> smooth(N, kNaN);
  for (std::size_t n = 0; n < N; ++n) {
    if (static_cast<int>(n) < half || n + half >= N) continue;
    double acc = 0.0;
    bool ok = true;
    for (int j = -half; j <= half; ++j) {
      double v = s[n + j];
      if (std::isnan(v)) {
        ok = false;
        break;
      }
      acc += v;
    }
    if (ok) smooth[n] = acc / smooth_window;
  }

  for (std::size_t n = 1; n < N; ++n) {
    if (std::isnan(smooth[n - 1]) || std::isnan(smooth[n])) continue;
    if (smooth[n - 1] < threshold && smooth[n] >= threshold) {
      double f = (threshold - smooth[n - 1]) / (smooth[n] - smooth[n - 1]);
      return {true, series.time(n - 1) + f * series.tau};
    }
  }
  return {false, 0.0};
}

}  // namespace memoryflow
