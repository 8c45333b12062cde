#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "memoryflow/errors.hpp"
#include "memoryflow/field_solver.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"

namespace mf = memoryflow;

namespace {

double interior_laplacian_error(int N) {
  auto grid = mf::Grid::line(0.0, 1.0, N);
  mf::Field u(grid.field_size());
  for (int i = 0; i <= N; ++i) u[i] = std::sin(std::numbers::pi * grid.x(i));
  auto lap = mf::assemble_laplacian(grid).apply(u);
  double pi2 = std::numbers::pi * std::numbers::pi;
  double worst = 0.0;
  for (int i = 1; i < N; ++i)
    worst = std::max(worst, std::abs(lap[i] + pi2 * u[i]));
  return worst;
}

}  // namespace

TEST_CASE("laplacian reproduces the sine eigenpair at second order") {
  double e64 = interior_laplacian_error(64);
  double e128 = interior_laplacian_error(128);
  CHECK(e64 < 0.01);
  CHECK(std::log2(e64 / e128) >= 1.9);

  auto grid = mf::Grid::line(0.0, 1.0, 64);
  mf::Field u(grid.field_size(), 1.0);
  auto lap = mf::assemble_laplacian(grid).apply(u);
  CHECK(lap.front() == 0.0);
  CHECK(lap.back() == 0.0);
}

TEST_CASE("2d laplacian matches the product eigenvalue") {
  int N = 48;
  auto grid = mf::Grid::square(0.0, 1.0, N);
  int W = grid.nodes_per_axis();
  mf::Field u(grid.field_size());
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i)
      u[static_cast<std::size_t>(j) * W + i] =
          std::sin(std::numbers::pi * grid.x(i)) *
          std::sin(std::numbers::pi * grid.x(j));
  auto lap = mf::apply_laplacian(grid, u);
  double want = -2.0 * std::numbers::pi * std::numbers::pi;
  std::size_t c = static_cast<std::size_t>(N / 2) * W + N / 2;
  CHECK(lap[c] == doctest::Approx(want * u[c]).epsilon(2e-3));
}

TEST_CASE("grid and model validation") {
  CHECK_THROWS_AS(mf::Grid::line(1.0, 0.0, 8), mf::config_error);
  CHECK_THROWS_AS(mf::Grid::line(0.0, 1.0, 2), mf::config_error);
  CHECK_THROWS_AS(mf::Model::fractional(1.5), mf::config_error);
  auto grid = mf::Grid::line(0.0, 1.0, 10);
  CHECK_THROWS_AS(mf::dirac_ring_field(grid), mf::config_error);
  auto model = mf::Model::local();
  mf::Field bad(3, 0.0);
  CHECK_THROWS_AS(mf::solve(model, grid, bad, 0.01, 0.1, {0.1}), mf::config_error);
  mf::Field good(grid.field_size(), 0.0);
  CHECK_THROWS_AS(mf::solve(model, grid, good, 0.01, 0.1, {0.015}),
                  mf::config_error);
}

TEST_CASE("integral functionals on closed-form fields") {
  auto grid = mf::Grid::line(0.0, 1.0, 200);
  mf::Field u(grid.field_size(), 1.0);
  CHECK(mf::total_mass(u, grid) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mf::second_moment(u, grid, 0.5) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-3));
  CHECK(mf::peak(u) == 1.0);

  auto d = mf::dirac_field(grid, 0.5);
  CHECK(mf::total_mass(d, grid) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("one implicit step keeps random nonnegative data nonnegative") {
  // all three schemes are M-matrix solves, so positivity is preserved
  auto grid = mf::Grid::line(0.0, 1.0, 128);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  mf::Field data(grid.field_size());
  for (auto& v : data) v = uni(rng);
  double tau = 0.01;
  for (auto model :
       {mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(0.5, 0.1)),
        mf::Model::local(), mf::Model::fractional(0.5)}) {
    auto res = mf::solve(model, grid, data, tau, 5 * tau, {3 * tau, 5 * tau});
    for (const auto& snap : res.snapshots)
      for (double v : snap) CHECK(v >= 0.0);
  }
}

TEST_CASE("dirichlet evolution loses mass and total variation") {
  double delta = 0.1;
  auto model =
      mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(0.5, delta));
  auto grid = mf::Grid::line(0.0, 1.0, 256);
  auto init = mf::dirac_field(grid, 0.5);
  auto res = mf::solve(model, grid, init, delta / 64.0, 2.0 * delta,
                       {0.5 * delta, 1.5 * delta});
  double m0 = mf::total_mass(init, grid);
  double m1 = mf::total_mass(res.snapshots[0], grid);
  double m2 = mf::total_mass(res.snapshots[1], grid);
  CHECK(m1 < m0);
  CHECK(m2 < m1);
  CHECK(mf::total_variation(res.snapshots[1], grid) <
        mf::total_variation(res.snapshots[0], grid));
}

TEST_CASE("solution of symmetric data stays mirror symmetric") {
  auto model =
      mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(0.5, 0.2));
  auto grid = mf::Grid::line(-1.0, 1.0, 128);
  auto res = mf::solve(model, grid, mf::dirac_field(grid, 0.0), 0.2 / 32.0, 0.1,
                       {0.1});
  const auto& u = res.snapshots[0];
  for (int i = 0; i <= 128; ++i)
    CHECK(u[i] == doctest::Approx(u[128 - i]).epsilon(1e-12));
}

TEST_CASE("short-horizon kernel matches the fractional derivative early") {
  // on t <= delta the windowed operator acts like the power-law derivative
  // with coefficient (1-alpha) delta^(alpha-1) Gamma(1-alpha) / alpha
  double alpha = 0.5, delta = 0.5;
  double c_factor = (1.0 - alpha) * std::pow(delta, alpha - 1.0) *
                    std::tgamma(1.0 - alpha) / alpha;
  auto grid = mf::Grid::line(-2.0, 2.0, 512);
  auto init = mf::dirac_field(grid, 0.0);
  double tau = delta / 512.0, t = delta / 16.0;
  auto nl = mf::solve(
      mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(alpha, delta)),
      grid, init, tau, t, {t});
  auto fr = mf::solve(mf::Model::fractional(alpha, 1.0 / c_factor), grid, init,
                      tau, t, {t});
  CHECK(mf::peak(nl.snapshots[0]) ==
        doctest::Approx(mf::peak(fr.snapshots[0])).epsilon(0.10));
}

TEST_CASE("ring datum in 2d evolves nonnegative and fourfold symmetric") {
  int N = 24;
  auto grid = mf::Grid::square(0.0, 1.0, N);
  auto model = mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(0.5, 1.0));
  auto res = mf::solve(model, grid, mf::dirac_ring_field(grid), 0.01, 0.05, {0.05});
  const auto& u = res.snapshots[0];
  int W = grid.nodes_per_axis();
  double top = mf::peak(u);
  for (int j = 0; j < W; ++j)
    for (int i = 0; i < W; ++i) {
      double v = u[static_cast<std::size_t>(j) * W + i];
      CHECK(v >= -1e-12 * top);
      double tr = u[static_cast<std::size_t>(i) * W + j];
      double mi = u[static_cast<std::size_t>(j) * W + (N - i)];
      CHECK(v == doctest::Approx(tr).epsilon(1e-7));
      CHECK(v == doctest::Approx(mi).epsilon(1e-7));
    }
}

TEST_CASE("msd series of a dirac on a wide domain grows") {
  auto model =
      mf::Model::nonlocal(mf::KernelSpec::normalized_fractional(0.5, 0.2));
  auto grid = mf::Grid::line(-6.0, 6.0, 768);
  auto res = mf::solve(model, grid, mf::dirac_field(grid, 0.0), 0.2 / 32.0, 0.5,
                       {0.5});
  REQUIRE(res.msd.values.size() > 10);
  for (std::size_t n = 1; n < res.msd.values.size(); ++n)
    CHECK(res.msd.values[n] > res.msd.values[n - 1]);
  // absorbing-boundary loss and trapezoid error both sit near 1e-6 here
  CHECK(mf::total_mass(res.snapshots[0], grid) == doctest::Approx(1.0).epsilon(1e-5));
}
