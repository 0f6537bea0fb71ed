#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "dunklsb/kernel.hpp"

using namespace dunklsb;
using CVec = std::vector<cplx>;

namespace {

// Direct partial sums of u^n / prod_{j<=n}(j + 2k[j odd]).
cplx brute_series(double k, cplx u, int terms) {
  cplx sum = 0.0, term = 1.0;
  for (int n = 0; n < terms; ++n) {
    sum += term;
    const int j = n + 1;
    term *= u / (j + (j % 2 ? 2.0 * k : 0.0));
  }
  return sum;
}

}  // namespace

TEST_CASE("gamma_n(k)") {
  CHECK(gamma_factor(0.0, 3) == 6.0);
  CHECK(gamma_factor(1.0, 1) == 3.0);
  CHECK(gamma_factor(1.0, 2) == 6.0);
  CHECK(gamma_factor(1.0, 0) == 1.0);
  // closed form 2^{2m} m! (k+1/2)_m
  for (double k : {0.25, 1.0, 2.5})
    for (int m = 0; m < 12; ++m) {
      double ref = std::pow(4.0, m) * std::tgamma(m + 1.0) * std::tgamma(k + 0.5 + m) / std::tgamma(k + 0.5);
      CHECK(gamma_factor(k, 2 * m) == doctest::Approx(ref).epsilon(1e-13));
      CHECK(log_gamma_factor(k, 2 * m) == doctest::Approx(std::log(ref)).epsilon(1e-13));
    }
  CHECK_THROWS_AS(gamma_factor(1.0, 400), std::overflow_error);
  CHECK(std::isfinite(log_gamma_factor(1.0, 400)));
  CHECK_THROWS_AS(gamma_factor(1.0, -1), std::invalid_argument);
}

TEST_CASE("kernel examples") {
  MultiplicitySetup s0({0.0}, 1.0), s1({1.0}, 1.0);
  CVec z{2.0}, w{3.0}, zero{0.0};
  CHECK(dunkl_kernel(s1, z, zero) == cplx(1.0));
  CHECK(std::abs(dunkl_kernel(s0, z, w) - std::exp(6.0)) < 1e-12 * std::exp(6.0));
  CVec one{1.0};
  CHECK(std::abs(dunkl_kernel(s1, one, one) - std::cosh(1.0)) < 1e-14);
}

TEST_CASE("rank-one kernel against the direct series") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (double k : {0.0, 0.5, 1.0, 2.5})
    for (int i = 0; i < 50; ++i) {
      cplx u(3.0 * g(rng), 3.0 * g(rng));
      cplx a = rank_one_kernel_scaled(k, u).value();
      cplx b = brute_series(k, u, 200);
      double mag = brute_series(k, std::abs(u), 200).real();
      CHECK(std::abs(a - b) < 1e-14 * mag);
    }
}

TEST_CASE("heat kernel") {
  MultiplicitySetup s0({0.0}, 1.5);
  for (double x : {-1.0, 0.3, 2.0})
    for (double q : {-2.0, 0.0, 1.1}) {
      double ref = std::exp(-(x - q) * (x - q) / 3.0);
      CHECK(heat_kernel_real(s0, {&x, 1}, {&q, 1}, 1.5) == doctest::Approx(ref).epsilon(1e-14));
    }
  // k=1, z=w=i, s=1: e * sum (-1)^n / gamma_n(1)
  MultiplicitySetup s1({1.0}, 1.0);
  CVec i1{cplx(0, 1)};
  cplx ref = std::exp(1.0) * brute_series(1.0, -1.0, 30);
  CHECK(std::abs(heat_kernel(s1, i1, i1, 1.0) - ref) < 1e-14);
}

TEST_CASE("heat mass against an independent sinh-sinh quadrature") {
  MultiplicitySetup s({1.0}, 1.0);
  boost::math::quadrature::sinh_sinh<double> ss;
  for (double x : {0.0, 0.7, 2.3}) {
    auto f = [&](double q) {
      if (q == 0.0 || std::abs(q) > 40.0) return 0.0;  // integrand < e^{-700} out there
      return heat_kernel_real(s, {&x, 1}, {&q, 1}, 1.0) * weight_density(s, {&q, 1});
    };
    CHECK(ss.integrate(f, 1e-14) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("bound margin") {
  MultiplicitySetup s0({0.0}, 1.0), s1({1.0}, 1.0);
  CVec one{1.0}, zero{0.0}, z{cplx(0.5, 2.0)};
  CHECK(kernel_bound_margin(s1, z, zero) == doctest::Approx(0.0));
  CHECK(std::abs(kernel_bound_margin(s0, one, one)) < 1e-14);
  CHECK(kernel_bound_margin(s1, one, one) == doctest::Approx(std::exp(1.0) - std::cosh(1.0)).epsilon(1e-13));
}

TEST_CASE("options and convergence errors") {
  KernelEvalOptions bad;
  bad.max_terms = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.max_terms = 50;
  bad.tail_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  KernelEvalOptions few;
  few.max_terms = 10;
  CHECK_THROWS_AS(rank_one_kernel_scaled(1.0, 50.0, few), KernelConvergenceError);
  MultiplicitySetup s({1.0, 0.0}, 1.0);
  CVec z{1.0};
  CHECK_THROWS_AS(dunkl_kernel(s, z, z), std::invalid_argument);
}

TEST_CASE("large arguments stay representable in scaled form") {
  KernelEvalOptions opts;
  opts.max_terms = 5000;
  auto v = rank_one_kernel_scaled(0.0, 800.0, opts);
  CHECK(v.value_shifted(-800.0).real() == doctest::Approx(1.0).epsilon(1e-12));
  // E_k(x) ~ Gamma(k+1/2)/sqrt(pi) (2/x)^k e^x for large x
  auto w = rank_one_kernel_scaled(1.0, 800.0, opts);
  double asym = std::tgamma(1.5) / std::sqrt(M_PI) * (2.0 / 800.0);
  CHECK(w.value_shifted(-800.0).real() == doctest::Approx(asym).epsilon(2e-3));
}
