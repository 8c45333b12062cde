#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "memoryflow/errors.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/quadrature.hpp"

namespace mf = memoryflow;
using cd = std::complex<double>;

namespace {

double quad_mass(const mf::KernelSpec& spec, double alpha) {
  // the s^-alpha head below s0 integrates by the power rule to
  // s0 rho(s0) / (1 - alpha); quadrature covers the smooth remainder
  double s0 = 1e-6;
  double head = mf::density(spec, s0) * s0 / (1.0 - alpha);
  auto res = mf::integrate_adaptive(
      [&](double s) { return mf::density(spec, s); }, {{s0, spec.delta}},
      1e-11);
  REQUIRE(res.converged);
  return head + res.value;
}

}  // namespace

TEST_CASE("normalized fractional density closed form") {
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  CHECK(mf::density(spec, 0.25) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mf::density(spec, 1.0) == 0.0);
  CHECK(mf::density(spec, 2.0) == 0.0);
  CHECK_THROWS_AS(mf::density(spec, 0.0), std::domain_error);
}

TEST_CASE("normalized fractional kernel has unit mass") {
  for (auto [a, d] : {std::pair{0.5, 1.0}, {0.2, 0.1}, {0.75, 0.2}, {0.9, 3.0}}) {
    auto spec = mf::KernelSpec::normalized_fractional(a, d);
    CHECK(mf::mass(spec) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(quad_mass(spec, a) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("first moment of the normalized fractional kernel") {
  // (1-alpha)/(2-alpha) * delta
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  CHECK(mf::first_moment(spec) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("truncated Caputo kernel mass and proportionality") {
  auto tc = mf::KernelSpec::truncated_caputo(0.5, 1.0);
  // alpha delta^(1-alpha) / Gamma(2-alpha) = 0.5 / Gamma(1.5) = 1/sqrt(pi)
  double want = 1.0 / std::sqrt(std::numbers::pi);
  CHECK(mf::mass(tc) == doctest::Approx(want).epsilon(1e-13));
  CHECK(quad_mass(tc, 0.5) == doctest::Approx(want).epsilon(1e-9));

  auto nf = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  double factor = mf::mass(tc) / mf::mass(nf);
  for (double s : {0.01, 0.1, 0.4, 0.9}) {
    CHECK(mf::density(tc, s) ==
          doctest::Approx(factor * mf::density(nf, s)).epsilon(1e-13));
  }
}

TEST_CASE("tabulated kernel interpolates and clips") {
  auto spec = mf::KernelSpec::tabulated({{0.5, 1.0}, {1.0, 2.0}});
  CHECK(spec.delta == doctest::Approx(1.0));
  CHECK(mf::density(spec, 0.75) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(mf::density(spec, 0.25) == 0.0);
  CHECK(mf::mass(spec) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(mf::detail::tabulated_integral(spec, 0.5, 1.0) ==
        doctest::Approx(0.75).epsilon(1e-13));
  CHECK(mf::detail::tabulated_integral(spec, 0.0, 0.75) ==
        doctest::Approx(0.5 * 0.25 * (1.0 + 1.5)).epsilon(1e-13));
}

TEST_CASE("kernel validation rejects bad parameters") {
  CHECK_THROWS_AS(mf::KernelSpec::normalized_fractional(0.0, 1.0),
                  mf::config_error);
  CHECK_THROWS_AS(mf::KernelSpec::normalized_fractional(1.0, 1.0),
                  mf::config_error);
  CHECK_THROWS_AS(mf::KernelSpec::normalized_fractional(0.5, -2.0),
                  mf::config_error);
  CHECK_THROWS_AS(mf::KernelSpec::tabulated({{0.5, 1.0}}), mf::config_error);
  CHECK_THROWS_AS(mf::KernelSpec::tabulated({{-0.5, 1.0}, {1.0, 1.0}}),
                  mf::config_error);
  CHECK_THROWS_AS(mf::KernelSpec::tabulated({{0.5, 1.0}, {0.4, 1.0}}),
                  mf::config_error);
  CHECK_THROWS_AS(mf::KernelSpec::tabulated({{0.5, -1.0}, {1.0, 1.0}}),
                  mf::config_error);
}

TEST_CASE("symbol domain restriction") {
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 0.2);
  CHECK_THROWS_AS(mf::symbol_K(spec, cd(-1.0, 3.0)), std::domain_error);
  CHECK_THROWS_AS(mf::symbol_K(spec, cd(0.0, 1.0)), std::domain_error);
  CHECK(std::isfinite(mf::detail::symbol_unrestricted(spec, cd(-1.0, 3.0)).real()));
}

TEST_CASE("symbol evaluation regimes agree with direct quadrature") {
  // |z delta| hits the series, lower-series, continued-fraction, asymptotic
  // and gap branches; the defining integral is the common oracle
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 0.2);
  const cd zs[] = {
      cd(1e-9, 2e-9),  cd(2.0, 1.5),     cd(30.0, 10.0),  cd(90.0, 20.0),
      cd(300.0, 0.0),  cd(40.0, 190.0),  cd(5.0, 70.0),   cd(-30.0, 80.0),
      cd(-5.0, 150.0), cd(-90.0, 160.0), cd(1e4, 3e3),    cd(0.3, -40.0),
  };
  for (cd z : zs) {
    cd direct = mf::detail::symbol_quadrature(z, spec.alpha, spec.delta);
    cd ladder = mf::detail::symbol_unrestricted(spec, z);
    CHECK(std::abs(ladder - direct) <= 1e-9 * std::abs(direct));
  }
}

TEST_CASE("symbol is conjugate-symmetric and linear in the kernel scale") {
  auto spec = mf::KernelSpec::normalized_fractional(0.3, 0.7);
  for (cd z : {cd(1.0, 5.0), cd(-2.0, 40.0), cd(100.0, 7.0)}) {
    cd k = mf::detail::symbol_unrestricted(spec, z);
    cd kc = mf::detail::symbol_unrestricted(spec, std::conj(z));
    CHECK(std::abs(kc - std::conj(k)) <= 1e-13 * std::abs(k));
    cd ks = mf::detail::symbol_unrestricted(spec, z, 3.5);
    CHECK(std::abs(ks - 3.5 * k) <= 1e-13 * std::abs(ks));
  }
}

TEST_CASE("symbol limits at small and large arguments") {
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 0.2);
  // K(z) = z mass - z^2 first_moment / 2 + O(z^3) from expanding 1 - e^{-zs}
  cd small = mf::symbol_K(spec, cd(1e-10, 0.0));
  CHECK(small.real() / 1e-10 == doctest::Approx(mf::mass(spec)).epsilon(1e-8));
  cd mid = mf::symbol_K(spec, cd(1e-3, 0.0));
  CHECK((1e-3 * mf::mass(spec) - mid.real()) / 1e-6 ==
        doctest::Approx(0.5 * mf::first_moment(spec)).epsilon(1e-3));
  // K(z) ~ C z^alpha with C = Gamma(2-alpha) delta^(alpha-1) / alpha
  double C = std::tgamma(1.5) * std::pow(0.2, -0.5) / 0.5;
  cd big = mf::symbol_K(spec, cd(1e9, 0.0));
  CHECK(big.real() == doctest::Approx(C * std::pow(1e9, 0.5)).epsilon(1e-3));
}
