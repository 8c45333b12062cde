#include <cmath>
#include <vector>

#include <doctest.h>

#include "memoryflow/errors.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/scalar_msd.hpp"

namespace mf = memoryflow;

namespace {

mf::TimeSeries run_msd(double alpha, double delta, double tau, double T,
                       const mf::HistorySignal& hist) {
  auto spec = mf::KernelSpec::normalized_fractional(alpha, delta);
  auto w = mf::build_weights(spec, tau);
  return mf::solve_scalar(w, hist, [](double) { return 2.0; }, T);
}

}  // namespace

TEST_CASE("history signal forms") {
  auto zero = mf::HistorySignal::zero();
  CHECK(zero(-0.3) == 0.0);

  auto aff = mf::HistorySignal::affine_scaled(5.0);
  CHECK(aff(-0.25) == doctest::Approx(5.0 * 0.5).epsilon(1e-14));
  CHECK(aff(0.0) == doctest::Approx(5.0).epsilon(1e-14));

  auto st = mf::HistorySignal::step(10.0, -0.5, -0.25);
  CHECK(st(-0.4) == 10.0);
  CHECK(st(-0.6) == 0.0);
  CHECK(st(-0.1) == 0.0);

  auto tab = mf::HistorySignal::tabulated({{-1.0, 2.0}, {0.0, 4.0}});
  CHECK(tab(-0.5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(tab(-2.0) == 0.0);

  auto s = aff.sample(2, 0.25);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(5.0 * 0.5));
  CHECK(s[1] == doctest::Approx(0.0));

  CHECK(aff.describe().size() > 0);
}

TEST_CASE("affine history with matching forcing is reproduced exactly") {
  // m(t) = k (1+2t) solves the scheme identically when rhs = 2k, because the
  // discrete operator annihilates affine functions by the weight definition
  for (auto [a, d] : {std::pair{0.5, 0.2}, {0.2, 0.5}, {0.75, 1.0}}) {
    auto spec = mf::KernelSpec::normalized_fractional(a, d);
    auto w = mf::build_weights(spec, d / 64.0);
    auto series = mf::solve_scalar(w, mf::HistorySignal::affine_scaled(1.0),
                                   [](double) { return 2.0; }, 5.0 * d);
    for (std::size_t n = 0; n < series.values.size(); ++n) {
      double want = 1.0 + 2.0 * series.time(n);
      CHECK(std::abs(series.values[n] - want) <= 1e-10 * want);
    }
  }
}

TEST_CASE("late-time growth approaches slope 2") {
  auto series = run_msd(0.2, 0.5, 0.5 / 64.0, 80.0, mf::HistorySignal::zero());
  double tau = series.tau;
  for (std::size_t n = series.values.size() - 100; n < series.values.size(); ++n) {
    double diff = series.values[n] - series.values[n - 1];
    CHECK(std::abs(diff - 2.0 * tau) <= 0.01 * 2.0 * tau);
  }
}

TEST_CASE("zero-history trajectories are strictly increasing") {
  for (double k : {0.25, 0.5, 1.0}) {
    auto series = run_msd(0.5, k, k / 128.0, 3.0 * k, mf::HistorySignal::zero());
    for (std::size_t n = 1; n < series.values.size(); ++n)
      CHECK(series.values[n] > series.values[n - 1]);
  }
}

TEST_CASE("local slope of an affine series tracks 2t/(1+2t)") {
  auto series = run_msd(0.5, 0.2, 0.2 / 64.0, 2.0,
                        mf::HistorySignal::affine_scaled(1.0));
  auto slope = mf::local_slope(series);
  REQUIRE(slope.values.size() == series.values.size());
  CHECK(std::isnan(slope.values.front()));
  CHECK(std::isnan(slope.values.back()));
  for (std::size_t n = 10; n + 10 < slope.values.size(); n += 50) {
    double t = series.time(n);
    CHECK(slope.values[n] == doctest::Approx(2.0 * t / (1.0 + 2.0 * t)).epsilon(5e-3));
  }
}

TEST_CASE("crossover detection on synthetic power laws") {
  double alpha = 0.3;
  SUBCASE("glued power laws cross near the joint") {
    mf::TimeSeries s;
    s.tau = 1e-3;
    s.alpha = alpha;
    for (int n = 0; n <= 4000; ++n) {
      double t = n * s.tau;
      s.values.push_back(t < 1.0 ? std::pow(t, alpha) : t);
    }
    auto cr = mf::crossover_time(s, alpha);
    REQUIRE(cr.found);
    CHECK(cr.t > 0.5);
    CHECK(cr.t < 1.5);
  }
  SUBCASE("a pure power law never crosses") {
    mf::TimeSeries s;
    s.tau = 1e-3;
    s.alpha = alpha;
    for (int n = 0; n <= 4000; ++n)
      s.values.push_back(std::pow(n * s.tau, alpha));
    CHECK_FALSE(mf::crossover_time(s, alpha).found);
  }
}

TEST_CASE("msd crossover lands inside the memory-horizon decade") {
  auto series = run_msd(0.2, 0.5, 0.5 / 128.0, 10.0, mf::HistorySignal::zero());
  auto cr = mf::crossover_time(series, 0.2);
  REQUIRE(cr.found);
  CHECK(cr.t >= 0.05);
  CHECK(cr.t <= 5.0);
}
