#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/quadrature.hpp"

using namespace heatlab;

TEST_CASE("polynomials integrate exactly") {
  const auto q = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
  CHECK(q.value == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(q.converged);
}

TEST_CASE("gaussian mass over a wide window") {
  const auto q = integrate(
      [](double x) { return std::exp(-x * x) / std::sqrt(M_PI); }, -40.0, 40.0,
      1e-13, 1e-13);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand") {
  // int_0^pi sin^2 = pi/2
  const auto q = integrate([](double x) { return std::sin(x) * std::sin(x); },
                           0.0, M_PI);
  CHECK(q.value == doctest::Approx(M_PI / 2.0).epsilon(1e-13));
}

TEST_CASE("jump discontinuity is subdivided to tolerance") {
  const auto q = integrate([](double x) { return x < 0.3 ? 1.0 : 2.0; }, 0.0,
                           1.0, 1e-10, 1e-10);
  CHECK(q.value == doctest::Approx(1.7).epsilon(1e-9));
}

TEST_CASE("half-line transform") {
  // int_0^inf e^{-x} = 1
  const auto q = integrate_upper([](double x) { return std::exp(-x); }, 0.0);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-9));
}
