#pragma once

#include <vector>

#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/scalar_msd.hpp"

namespace memoryflow {

// Uniform grid on (a,b) or (a,b)^2 with N intervals per axis and homogeneous
// Dirichlet boundaries. Fields store all nodes including the boundary ring
// (kept at zero by the solvers); only interior nodes are unknowns.
struct Grid {
  int dim{1};
  double a{0.0};
  double b{1.0};
  int N{8};

  double h() const { return (b - a) / N; }
  int nodes_per_axis() const { return N + 1; }
  std::size_t field_size() const;
  double x(int i) const { return a + i * h(); }
  int nearest_node(double x0) const;

  static Grid line(double a, double b, int N);
  static Grid square(double a, double b, int N);
};

using Field = std::vector<double>;

enum class ModelKind { NonlocalInTime, Local, FractionalCaputo };

// The three time-stepping laws compared in the experiments. diffusivity
// multiplies the Laplacian; FractionalCaputo uses it to absorb the constant
// factor between kernel normalizations when matching the nonlocal model.
struct Model {
  ModelKind kind{ModelKind::NonlocalInTime};
  KernelSpec spec;
  double alpha{0.5};
  double diffusivity{1.0};

  static Model nonlocal(const KernelSpec& spec, double diffusivity = 1.0);
  static Model local(double diffusivity = 1.0);
  static Model fractional(double alpha, double diffusivity = 1.0);
};

// Second differences with Dirichlet closure; boundary rows of the result are
// zero. Symmetric negative-definite as an operator on interior values.
Field apply_laplacian(const Grid& grid, const Field& u);

// the same stencil as a reusable operator on interior values
struct Laplacian {
  Grid grid;
  Field apply(const Field& u) const { return apply_laplacian(grid, u); }
};
inline Laplacian assemble_laplacian(const Grid& grid) { return {grid}; }

// Prescribed fields at t = -tau, ..., -M tau, newest-first. The nonlocal
// stepper reads exactly M slots; the Caputo reference reads its whole past.
struct HistoryField {
  std::vector<Field> slots;

  static HistoryField uniform(const Field& f, int M);
  static HistoryField from_snapshots(std::vector<Field> newest_first);
};

// One implicit step to the new time level:
//   NonlocalInTime:    (W0 I - D Lap) u^n = sum_k w_k u^{n-k}
//   Local:             (I/tau - D Lap) u^n = u^{n-1}/tau
//   FractionalCaputo:  L1 scheme with weights b_j = (j+1)^{1-alpha} - j^{1-alpha}
// 1D systems are solved by tridiagonal elimination, 2D by diagonally
// preconditioned conjugate gradients (relative residual 1e-10).
Field step(const Model& model, const MemoryWeights& weights,
           const HistoryField& state, const Grid& grid);

struct SolveResult {
  std::vector<double> times;
  std::vector<Field> snapshots;
  TimeSeries msd;  // second moment about the initial centroid, dim = 1 only
};

// Marches from t = 0 to T with the given time-independent history field
// (also the t = 0 state) and records snapshots at the requested times,
// which must lie on the step grid.
SolveResult solve(const Model& model, const Grid& grid, const Field& history,
                  double tau, double T, const std::vector<double>& record_times);

// Trapezoidal quadrature of (x - center)^2 u over the domain (dim = 1).
double second_moment(const Field& u, const Grid& grid, double center);

// Trapezoidal integral of u over the domain.
double total_mass(const Field& u, const Grid& grid);

double peak(const Field& u);

// Sum of |u_{i+1} - u_i| (dim = 1).
double total_variation(const Field& u, const Grid& grid);

// Point mass: 1/h^dim at the node nearest to the given position.
Field dirac_field(const Grid& grid, double x0);
Field dirac_field_2d(const Grid& grid, double x0, double y0);

// Uniform line mass on the boundary of the centered square spanning the
// middle half of the domain; each ring node carries value 1/(2h) so the
// field integrates to 1. Requires dim = 2 and 4 | N.
Field dirac_ring_field(const Grid& grid);

}  // namespace memoryflow
