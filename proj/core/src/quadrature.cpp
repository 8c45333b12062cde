#include "memoryflow/quadrature.hpp"

#include <algorithm>
#include <queue>

namespace memoryflow {

namespace {
struct Panel {
  double error;
  double a;
  double b;
  bool operator<(const Panel& o) const { return error < o.error; }
};
}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::vector<std::pair<double, double>> seeds,
                                  double abs_tol, int max_panels) {
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double err_total = 0.0;
  int n = 0;
  for (const auto& [a, b] : seeds) {
    const auto [v, e] = gk15(f, a, b);
    heap.push({e, a, b});
    total += v;
    err_total += e;
    ++n;
  }
  while (err_total > abs_tol && n < max_panels && !heap.empty()) {
    const Panel p = heap.top();
    heap.pop();
    if (p.b - p.a < 1e-14 * std::max(std::abs(p.b), 1.0) || p.error == 0.0)
      continue;
    const auto [v, e] = gk15(f, p.a, p.b);
    const double m = 0.5 * (p.a + p.b);
    const auto [v1, e1] = gk15(f, p.a, m);
    const auto [v2, e2] = gk15(f, m, p.b);
    total += v1 + v2 - v;
    err_total += e1 + e2 - e;
    heap.push({e1, p.a, m});
    heap.push({e2, m, p.b});
    ++n;
  }
  return {total, err_total, n, err_total <= abs_tol};
}

AdaptiveResult integrate(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, int max_panels) {
  return integrate_adaptive(f, {{a, b}}, abs_tol, max_panels);
}

}  // namespace memoryflow
