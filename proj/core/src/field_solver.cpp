#include "memoryflow/field_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "memoryflow/errors.hpp"

namespace memoryflow {

namespace {

void check_dim(const Grid& grid, int dim, const char* what) {
  if (grid.dim != dim)
    throw config_error(std::string(what) + " requires a " + std::to_string(dim) + "D grid");
}

// (d I + e Lap-stencil) u = rhs on interior nodes, Dirichlet closure.
// 1D: tridiagonal elimination with constant coefficients.
Field solve_linear_1d(const Grid& grid, double d, double e, const Field& rhs) {
  int n = grid.N - 1;
  std::vector<double> c(n), y(n);
  double beta = d;
  y[0] = rhs[1] / beta;
  for (int i = 1; i < n; ++i) {
    c[i - 1] = e / beta;
    beta = d - e * c[i - 1];
    y[i] = (rhs[i + 1] - e * y[i - 1]) / beta;
  }
  Field u(grid.field_size(), 0.0);
  u[n] = y[n - 1];
  for (int i = n - 2; i >= 0; --i) u[i + 1] = y[i] - c[i] * u[i + 2];
  return u;
}

// 2D: conjugate gradients with the constant-diagonal (Jacobi) preconditioner.
Field solve_linear_2d(const Grid& grid, double d, double e, const Field& rhs) {
  int W = grid.nodes_per_axis();
  int n = grid.N - 1;
  auto at = [W](int ix, int iy) { return static_cast<std::size_t>(iy) * W + ix; };

  auto matvec = [&](const Field& u, Field& out) {
    for (int iy = 1; iy <= n; ++iy)
      for (int ix = 1; ix <= n; ++ix)
        out[at(ix, iy)] = d * u[at(ix, iy)] +
                          e * (u[at(ix - 1, iy)] + u[at(ix + 1, iy)] +
                               u[at(ix, iy - 1)] + u[at(ix, iy + 1)]);
  };

  std::size_t sz = grid.field_size();
  Field u(sz, 0.0), r(sz, 0.0), p(sz, 0.0), Ap(sz, 0.0);
  double bnorm = 0.0;
  for (int iy = 1; iy <= n; ++iy)
    for (int ix = 1; ix <= n; ++ix) {
      r[at(ix, iy)] = rhs[at(ix, iy)];
      bnorm += r[at(ix, iy)] * r[at(ix, iy)];
    }
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return u;

  p = r;
  double rr = bnorm * bnorm;
  int max_iter = 10 * n * n;
  for (int it = 0; it < max_iter; ++it) {
    matvec(p, Ap);
    double pAp = 0.0;
    for (int iy = 1; iy <= n; ++iy)
      for (int ix = 1; ix <= n; ++ix) pAp += p[at(ix, iy)] * Ap[at(ix, iy)];
    double alpha = rr / pAp;
    double rr_new = 0.0;
    for (int iy = 1; iy <= n; ++iy)
      for (int ix = 1; ix <= n; ++ix) {
        u[at(ix, iy)] += alpha * p[at(ix, iy)];
        r[at(ix, iy)] -= alpha * Ap[at(ix, iy)];
        rr_new += r[at(ix, iy)] * r[at(ix, iy)];
      }
    if (std::sqrt(rr_new) <= 1e-10 * bnorm) return u;
    double beta = rr_new / rr;
    rr = rr_new;
    for (int iy = 1; iy <= n; ++iy)
      for (int ix = 1; ix <= n; ++ix)
        p[at(ix, iy)] = r[at(ix, iy)] + beta * p[at(ix, iy)];
  }
  throw numerics_error("conjugate gradients stalled: relative residual " +
                       std::to_string(std::sqrt(rr) / bnorm));
}

Field solve_linear(const Grid& grid, double d, double e, const Field& rhs) {
  return grid.dim == 1 ? solve_linear_1d(grid, d, e, rhs)
                       : solve_linear_2d(grid, d, e, rhs);
}

// rhs accumulation and the implicit solve for one step, shared by the
// step() entry point and the solve() marcher. slot(k) is u^{n-1-k}.
Field advance(const Model& model, const MemoryWeights& weights, const Grid& grid,
              const std::function<const Field&(int)>& slot, int available) {
  double h2 = grid.h() * grid.h();
  double D = model.diffusivity;
  std::size_t sz = grid.field_size();
  Field rhs(sz, 0.0);

  switch (model.kind) {
    case ModelKind::NonlocalInTime: {
      if (available < weights.M)
        throw config_error("nonlocal step needs a full history ring");
      for (int k = weights.M; k >= 1; --k) {
        const Field& f = slot(k - 1);
        double wk = weights.w[k - 1];
        for (std::size_t i = 0; i < sz; ++i) rhs[i] += wk * f[i];
      }
      return solve_linear(grid, weights.W0 + 2.0 * grid.dim * D / h2, -D / h2, rhs);
    }
    case ModelKind::Local: {
      if (available < 1) throw config_error("local step needs the previous level");
      const Field& f = slot(0);
      double inv_tau = 1.0 / weights.tau;
      for (std::size_t i = 0; i < sz; ++i) rhs[i] = inv_tau * f[i];
      return solve_linear(grid, inv_tau + 2.0 * grid.dim * D / h2, -D / h2, rhs);
    }
    case ModelKind::FractionalCaputo: {
      if (available < 1) throw config_error("fractional step needs the past levels");
      int n = available;
      double beta = 1.0 - model.alpha;
      double coef = 1.0 / (std::tgamma(2.0 - model.alpha) *
                           std::pow(weights.tau, model.alpha));
      auto b = [beta](int j) { return std::pow(j + 1.0, beta) - std::pow(j, beta); };
      for (int j = 1; j < n; ++j) {
        double c = coef * (b(j - 1) - b(j));
        const Field& f = slot(j - 1);
        for (std::size_t i = 0; i < sz; ++i) rhs[i] += c * f[i];
      }
      double c0 = coef * b(n - 1);
      const Field& f0 = slot(n - 1);
      for (std::size_t i = 0; i < sz; ++i) rhs[i] += c0 * f0[i];
      return solve_linear(grid, coef + 2.0 * grid.dim * D / h2, -D / h2, rhs);
    }
  }
  return Field(sz, 0.0);
}

double centroid(const Field& u, const Grid& grid) {
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i <= grid.N; ++i) {
    double w = (i == 0 || i == grid.N) ? 0.5 : 1.0;
    m0 += w * u[i];
    m1 += w * u[i] * grid.x(i);
  }
  if (std::abs(m0) < 1e-300) return 0.5 * (grid.a + grid.b);
  return m1 / m0;
}

}  // namespace

std::size_t Grid::field_size() const {
  std::size_t w = static_cast<std::size_t>(N) + 1;
  return dim == 1 ? w : w * w;
}

int Grid::nearest_node(double x0) const {
  auto i = static_cast<int>(std::llround((x0 - a) / h()));
  return std::clamp(i, 0, N);
}

Grid Grid::line(double a, double b, int N) {
  if (!(b > a) || N < 3) throw config_error("grid needs b > a and N >= 3");
  return {1, a, b, N};
}

Grid Grid::square(double a, double b, int N) {
  if (!(b > a) || N < 3) throw config_error("grid needs b > a and N >= 3");
  return {2, a, b, N};
}

Model Model::nonlocal(const KernelSpec& spec, double diffusivity) {
  Model m;
  m.kind = ModelKind::NonlocalInTime;
  m.spec = spec;
  m.alpha = spec.alpha;
  m.diffusivity = diffusivity;
  return m;
}

Model Model::local(double diffusivity) {
  Model m;
  m.kind = ModelKind::Local;
  m.diffusivity = diffusivity;
  return m;
}

Model Model::fractional(double alpha, double diffusivity) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw config_error("fractional order must lie in (0, 1)");
  Model m;
  m.kind = ModelKind::FractionalCaputo;
  m.alpha = alpha;
  m.diffusivity = diffusivity;
  return m;
}

Field apply_laplacian(const Grid& grid, const Field& u) {
  double inv_h2 = 1.0 / (grid.h() * grid.h());
  Field out(grid.field_size(), 0.0);
  if (grid.dim == 1) {
    for (int i = 1; i < grid.N; ++i)
      out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
  } else {
    int W = grid.nodes_per_axis();
    for (int iy = 1; iy < grid.N; ++iy)
      for (int ix = 1; ix < grid.N; ++ix) {
        std::size_t c = static_cast<std::size_t>(iy) * W + ix;
        out[c] = (u[c - 1] + u[c + 1] + u[c - W] + u[c + W] - 4.0 * u[c]) * inv_h2;
      }
  }
  return out;
}

HistoryField HistoryField::uniform(const Field& f, int M) {
  HistoryField h;
  h.slots.assign(M, f);
  return h;
}

HistoryField HistoryField::from_snapshots(std::vector<Field> newest_first) {
  HistoryField h;
  h.slots = std::move(newest_first);
  return h;
}

Field step(const Model& model, const MemoryWeights& weights,
           const HistoryField& state, const Grid& grid) {
  auto slot = [&state](int k) -> const Field& { return state.slots[k]; };
  return advance(model, weights, grid, slot, static_cast<int>(state.slots.size()));
}

SolveResult solve(const Model& model, const Grid& grid, const Field& history,
                  double tau, double T, const std::vector<double>& record_times) {
  if (history.size() != grid.field_size())
    throw config_error("history field does not match the grid");
  MemoryWeights weights;
  if (model.kind == ModelKind::NonlocalInTime) {
    weights = build_weights(model.spec, tau);
  } else {
    weights.tau = tau;
    weights.M = 1;
  }

  auto n_end = static_cast<long long>(std::floor(T / tau * (1.0 + 1e-12)));
  std::vector<long long> record_steps;
  for (double rt : record_times) {
    auto n = static_cast<long long>(std::llround(rt / tau));
    if (std::abs(rt - static_cast<double>(n) * tau) > 1e-9 * std::max(1.0, rt) ||
        n < 0 || n > n_end)
      throw config_error("record time " + std::to_string(rt) +
                         " is not on the step grid");
    record_steps.push_back(n);
  }

  SolveResult out;
  out.msd.tau = tau;
  out.msd.alpha = model.alpha;
  out.msd.delta = model.spec.delta;
  out.msd.history = "field";
  double center = grid.dim == 1 ? centroid(history, grid) : 0.0;

  // Caputo keeps its whole past; the others need only M levels.
  bool full_past = model.kind == ModelKind::FractionalCaputo;
  std::vector<Field> past;
  RingBuffer<Field> ring(std::max(weights.M, 1), history);
  if (full_past) past.push_back(history);

  Field current = history;
  auto record = [&](long long n) {
    for (std::size_t j = 0; j < record_steps.size(); ++j)
      if (record_steps[j] == n) {
        out.times.push_back(static_cast<double>(n) * tau);
        out.snapshots.push_back(current);
      }
    if (grid.dim == 1) out.msd.values.push_back(second_moment(current, grid, center));
  };
  record(0);

  for (long long n = 1; n <= n_end; ++n) {
    if (full_past) {
      auto slot = [&past](int k) -> const Field& {
        return past[past.size() - 1 - static_cast<std::size_t>(k)];
      };
      current = advance(model, weights, grid, slot, static_cast<int>(past.size()));
      past.push_back(current);
    } else {
      auto slot = [&ring](int k) -> const Field& { return ring[k]; };
      current = advance(model, weights, grid, slot, weights.M);
      ring.push(current);
    }
    record(n);
  }
  return out;
}

double second_moment(const Field& u, const Grid& grid, double center) {
  check_dim(grid, 1, "second_moment");
  double acc = 0.0;
  for (int i = 0; i <= grid.N; ++i) {
    double w = (i == 0 || i == grid.N) ? 0.5 : 1.0;
    double dx = grid.x(i) - center;
    acc += w * dx * dx * u[i];
  }
  return acc * grid.h();
}

double total_mass(const Field& u, const Grid& grid) {
  auto wgt = [&](int i) { return (i == 0 || i == grid.N) ? 0.5 : 1.0; };
  double acc = 0.0;
  if (grid.dim == 1) {
    for (int i = 0; i <= grid.N; ++i) acc += wgt(i) * u[i];
    return acc * grid.h();
  }
  int W = grid.nodes_per_axis();
  for (int iy = 0; iy <= grid.N; ++iy)
    for (int ix = 0; ix <= grid.N; ++ix)
      acc += wgt(ix) * wgt(iy) * u[static_cast<std::size_t>(iy) * W + ix];
  return acc * grid.h() * grid.h();
}

double peak(const Field& u) {
  return *std::max_element(u.begin(), u.end());
}

double total_variation(const Field& u, const Grid& grid) {
  check_dim(grid, 1, "total_variation");
  double acc = 0.0;
  for (int i = 0; i < grid.N; ++i) acc += std::abs(u[i + 1] - u[i]);
  return acc;
}

Field dirac_field(const Grid& grid, double x0) {
  check_dim(grid, 1, "dirac_field");
  Field u(grid.field_size(), 0.0);
  int i = std::clamp(grid.nearest_node(x0), 1, grid.N - 1);
  u[i] = 1.0 / grid.h();
  return u;
}

Field dirac_field_2d(const Grid& grid, double x0, double y0) {
  check_dim(grid, 2, "dirac_field_2d");
  Field u(grid.field_size(), 0.0);
  int ix = std::clamp(grid.nearest_node(x0), 1, grid.N - 1);
  int iy = std::clamp(grid.nearest_node(y0), 1, grid.N - 1);
  u[static_cast<std::size_t>(iy) * grid.nodes_per_axis() + ix] = 1.0 / (grid.h() * grid.h());
  return u;
}

Field dirac_ring_field(const Grid& grid) {
  check_dim(grid, 2, "dirac_ring_field");
  if (grid.N % 4 != 0) throw config_error("ring datum needs N divisible by 4");
  int q1 = grid.N / 4;
  int q3 = 3 * grid.N / 4;
  double value = 1.0 / (2.0 * grid.h() * (grid.b - grid.a));
  int W = grid.nodes_per_axis();
  Field u(grid.field_size(), 0.0);
  for (int i = q1; i <= q3; ++i) {
    u[static_cast<std::size_t>(q1) * W + i] = value;
    u[static_cast<std::size_t>(q3) * W + i] = value;
    u[static_cast<std::size_t>(i) * W + q1] = value;
    u[static_cast<std::size_t>(i) * W + q3] = value;
  }
  return u;
}

}  // namespace memoryflow
