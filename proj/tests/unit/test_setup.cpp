#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "dunklsb/setup.hpp"

using namespace dunklsb;

TEST_CASE("gamma_mu sums the multiplicities") {
  CHECK(gamma_mu(MultiplicitySetup({0.0}, 1.0)) == 0.0);
  CHECK(gamma_mu(MultiplicitySetup({1.0}, 1.0)) == 1.0);
  CHECK(gamma_mu(MultiplicitySetup({0.5, 1.5}, 1.0)) == 2.0);
  CHECK(homogeneity(MultiplicitySetup({0.5, 1.5}, 1.0)) == 3.0);
}

TEST_CASE("setup validation") {
  CHECK_THROWS_AS(MultiplicitySetup({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicitySetup({-0.1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicitySetup({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicitySetup({1.0}, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicitySetup({std::nan("")}, 1.0), std::invalid_argument);
  MultiplicitySetup s({0.5, 2.0}, 1.0);
  CHECK(s.at_time(3.0).t() == 3.0);
  CHECK(s.at_time(3.0).k(1) == 2.0);
}

TEST_CASE("weight density") {
  double q = 2.0;
  CHECK(weight_density(MultiplicitySetup({0.0}, 1.0), {&q, 1}) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  q = 0.0;
  CHECK(weight_density(MultiplicitySetup({1.0}, 1.0), {&q, 1}) == 0.0);
  q = 3.0;
  CHECK(weight_density(MultiplicitySetup({0.5}, 1.0), {&q, 1}) == doctest::Approx(1.5).epsilon(1e-14));
  double qq[2] = {1.0, 2.0};
  CHECK_THROWS_AS(weight_density(MultiplicitySetup({0.5}, 1.0), {qq, 2}), std::invalid_argument);
}

TEST_CASE("Macdonald-Mehta-Selberg constant") {
  const double s2pi = std::sqrt(2.0 * std::numbers::pi);
  CHECK(mms_constant(MultiplicitySetup({0.0}, 1.0)) == doctest::Approx(s2pi).epsilon(1e-14));
  CHECK(mms_constant(MultiplicitySetup({0.5}, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mms_constant(MultiplicitySetup({1.0}, 1.0)) == doctest::Approx(s2pi).epsilon(1e-14));
  // t does not enter
  CHECK(mms_constant(MultiplicitySetup({2.5}, 0.3)) == mms_constant(MultiplicitySetup({2.5}, 7.0)));
}

TEST_CASE("mms_constant_check integrates the definition independently") {
  const double s2pi = std::sqrt(2.0 * std::numbers::pi);
  CHECK(std::abs(mms_constant_check(MultiplicitySetup({0.0}, 1.0)) / s2pi - 1.0) < 1e-12);
  CHECK(std::abs(mms_constant_check(MultiplicitySetup({1.0}, 2.0)) / s2pi - 1.0) < 1e-12);
  CHECK(std::abs(mms_constant_check(MultiplicitySetup({0.5, 0.5}, 1.0)) / 4.0 - 1.0) < 1e-12);
  // |x| e^{-x^2/2}: antiderivative gives 2 directly
  CHECK(std::abs(mms_constant_check(MultiplicitySetup({0.5}, 1.0)) - 2.0) < 1e-12);
  for (double k : {0.0, 0.5, 1.0, 2.5, 7.0})
    for (double t : {0.5, 1.0, 2.0}) {
      MultiplicitySetup s({k}, t);
      CHECK(std::abs(gaussian_mass_check(s) - 1.0) < 1e-10);
    }
}
