#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "memoryflow/errors.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/quadrature.hpp"

namespace mf = memoryflow;

namespace {

// direct quadrature of the operator for smooth v, the discrete scheme's
// oracle; y = sqrt(s) removes the alpha = 0.5 endpoint singularity, giving
// integral of 2 (v(t) - v(t - y^2)) / y^2 * y rho(y^2) dy with a smooth limit
double operator_quadrature(const mf::KernelSpec& spec, double (*v)(double),
                           double t) {
  REQUIRE(spec.alpha == 0.5);
  // below y0 the integrand is flat at its limit 2 y rho(y^2) v'(t), which
  // dodges the catastrophic cancellation of v(t) - v(t - y^2) at tiny y
  double y0 = 1e-5;
  double dv = (v(t + 1e-5) - v(t - 1e-5)) / 2e-5;
  double head = 2.0 * y0 * y0 * mf::density(spec, y0 * y0) * dv;
  auto res = mf::integrate_adaptive(
      [&](double y) {
        double s = y * y;
        return 2.0 * (v(t) - v(t - s)) / s * y * mf::density(spec, s);
      },
      {{y0, std::sqrt(spec.delta)}}, 1e-12);
  REQUIRE(res.converged);
  return head + res.value;
}

double apply_to(const mf::MemoryWeights& w, double (*v)(double), double t) {
  std::vector<double> hist(static_cast<std::size_t>(w.M));
  for (int k = 1; k <= w.M; ++k) hist[k - 1] = v(t - k * w.tau);
  return mf::apply(w, v(t), hist);
}

double fitted_order(const std::vector<double>& taus,
                    const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  auto n = static_cast<double>(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    double x = std::log(taus[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("weight closed-form spot values") {
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  SUBCASE("first weight at tau = 0.01") {
    auto w = mf::build_weights(spec, 0.01);
    CHECK(w.M == 100);
    CHECK(w.w[0] == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("second weight at tau = 0.5") {
    auto w = mf::build_weights(spec, 0.5);
    CHECK(w.M == 2);
    CHECK(w.w[1] == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("weights are positive and decreasing, W0 sums them") {
  auto spec = mf::KernelSpec::normalized_fractional(0.3, 0.7);
  auto w = mf::build_weights(spec, 0.7 / 256.0);
  double sum = 0.0;
  for (int k = 0; k < w.M; ++k) {
    CHECK(w.w[k] > 0.0);
    if (k > 0) CHECK(w.w[k] < w.w[k - 1]);
    sum += w.w[k];
  }
  CHECK(w.W0 == doctest::Approx(sum).epsilon(1e-13));
}

TEST_CASE("non-divisible tau is rejected with the nearest admissible value") {
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  CHECK_THROWS_WITH_AS(mf::build_weights(spec, 0.3),
                       doctest::Contains("nearest admissible tau"),
                       mf::config_error);
  CHECK_THROWS_AS(mf::build_weights(spec, -0.1), mf::config_error);
}

TEST_CASE("discrete operator is exact in the t^2 sanity identity") {
  // G applied to t^2 equals 2t - first_moment for any kernel of unit mass
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  double exact = 2.0 - 1.0 / 3.0;
  auto w = mf::build_weights(spec, 1.0 / 512.0);
  CHECK(apply_to(w, [](double t) { return t * t; }, 1.0) ==
        doctest::Approx(exact).epsilon(2e-3));
}

TEST_CASE("discrete operator converges to the quadrature oracle") {
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 0.5);
  auto check_rate = [&](double (*v)(double)) {
    double exact = operator_quadrature(spec, v, 1.0);
    std::vector<double> taus, errs;
    for (int div : {64, 128, 256, 512}) {
      double tau = spec.delta / div;
      auto w = mf::build_weights(spec, tau);
      taus.push_back(tau);
      errs.push_back(std::abs(apply_to(w, v, 1.0) - exact));
    }
    CHECK(fitted_order(taus, errs) >= 0.9);
  };
  check_rate([](double t) { return t * t * t; });
  check_rate([](double t) { return std::sin(t); });
}

TEST_CASE("W0 approaches the c coefficient over tau^alpha") {
  for (auto [a, d] : {std::pair{0.5, 1.0}, {0.75, 0.2}}) {
    auto spec = mf::KernelSpec::normalized_fractional(a, d);
    auto w = mf::build_weights(spec, d / 8192.0);
    double c = mf::c_coefficient(a, d);
    CHECK(w.W0 * std::pow(w.tau, a) / c == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("c coefficient reference values") {
  CHECK(mf::c_coefficient(0.5, 1.0) ==
        doctest::Approx(1.860025079221).epsilon(1e-10));
  CHECK(mf::c_coefficient(0.75, 0.2) ==
        doctest::Approx(1.903869234503).epsilon(1e-10));
  CHECK(mf::c_coefficient(0.5, 0.2) ==
        doctest::Approx(4.159142516993).epsilon(1e-10));
  CHECK_THROWS_AS(mf::c_coefficient(1.5, 1.0), mf::config_error);
}

TEST_CASE("ring buffer reads newest-first and starts filled") {
  mf::RingBuffer<int> ring(3, 7);
  CHECK(ring[0] == 7);
  CHECK(ring[2] == 7);
  ring.push(1);
  ring.push(2);
  CHECK(ring[0] == 2);
  CHECK(ring[1] == 1);
  CHECK(ring[2] == 7);
  ring.push(3);
  ring.push(4);
  CHECK(ring[0] == 4);
  CHECK(ring[1] == 3);
  CHECK(ring[2] == 2);
  CHECK(ring.capacity() == 3);
}
