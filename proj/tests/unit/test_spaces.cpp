#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dunklsb/kernel.hpp"
#include "dunklsb/spaces.hpp"

using namespace dunklsb;

namespace {

SampledFunction gauss_times(int power, double envelope) {
  return make_separable("q^n e", {[power](double q) { return cplx(std::pow(q, power)); }}, envelope);
}

CoeffSeries z_power(int n, int degree) {
  return CoeffSeries::monomial(1, degree, std::span<const int>(&n, 1));
}

}  // namespace

TEST_CASE("L2 inner products") {
  MultiplicitySetup s({1.0}, 1.0);
  OmegaIntegrator integ(s, 40);
  auto e0 = gauss_times(0, 0.25), e1 = gauss_times(1, 0.25);
  CHECK(l2_inner(integ, e0, e0).real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l2_inner(integ, e1, e1).real() == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(std::abs(l2_inner(integ, e0, e1)) < 1e-15);
  auto bare = make_sampled("1", [](std::span<const double>) { return cplx(1.0); });
  CHECK_THROWS_AS(l2_inner(integ, bare, bare), std::invalid_argument);
}

TEST_CASE("B inner product and kernel") {
  MultiplicitySetup s1({1.0}, 1.0), s2({1.0}, 2.0), s0({0.0}, 1.0);
  CHECK(b_inner(s1, z_power(1, 5), z_power(1, 5)).real() == doctest::Approx(3.0));
  CHECK(b_inner(s2, z_power(2, 5), z_power(2, 5)).real() == doctest::Approx(24.0));
  CHECK(b_inner(s1, z_power(1, 5), z_power(2, 5)) == cplx(0.0));
  cplx z(0, 2);
  auto K = b_kernel(s0, std::span<const cplx>(&z, 1), 40);
  CHECK(std::abs(b_inner(s0, K, z_power(1, 40)) - z) < 1e-13);
  cplx h(0.5);
  auto K2 = b_kernel(s2, std::span<const cplx>(&h, 1), 40);
  CHECK(std::abs(b_inner(s2, K2, z_power(3, 40)) - 0.125) < 1e-14);
  // |K_z|^2 = K_z(z) = E(|z|^2 / s)
  cplx w(0.7, -0.4);
  auto Kw = b_kernel(s2, std::span<const cplx>(&w, 1), 60);
  CHECK(b_norm(s2, Kw) * b_norm(s2, Kw) ==
        doctest::Approx(rank_one_kernel_real(1.0, std::norm(w) / 2.0)).epsilon(1e-13));
}

TEST_CASE("C kernel") {
  MultiplicitySetup s0({0.0}, 1.0), s1({1.0}, 1.5);
  cplx zero(0.0);
  auto L0 = c_kernel(s0, std::span<const cplx>(&zero, 1), 40);
  for (cplx w : {cplx(0.4), cplx(1.0, -0.3)})
    CHECK(std::abs(evaluate(L0, std::span<const cplx>(&w, 1)) - std::exp(-w * w / 4.0) / std::sqrt(2.0)) < 1e-13);
  // <L_0, e^{-z^2/4t} z^{2m}> = value at 0
  auto L = c_kernel(s1, std::span<const cplx>(&zero, 1), 40);
  for (int m = 0; m < 3; ++m) {
    auto f = gaussian_multiply(z_power(2 * m, 40), -1.0 / 6.0);
    CHECK(std::abs(c_inner(s1, L, f) - (m == 0 ? 1.0 : 0.0)) < 1e-12);
  }
  // parity: L_0 is even, so it is orthogonal to odd functions
  auto odd = gaussian_multiply(z_power(1, 40), -1.0 / 6.0);
  CHECK(std::abs(c_inner(s1, L, odd)) < 1e-15);
}

TEST_CASE("G L_z is a dilated B kernel") {
  MultiplicitySetup s({1.0}, 2.0);
  cplx z(0.6, 0.3);
  auto Lz = c_kernel(s, std::span<const cplx>(&z, 1), 40);
  auto GL = g_map(s, Lz);
  cplx half = z / 2.0;
  auto K = b_kernel(s.at_time(1.0), std::span<const cplx>(&half, 1), 40);
  cplx pref = std::pow(2.0, -0.75) * std::exp(-std::conj(z) * std::conj(z) / 8.0);
  for (cplx w : {cplx(0.2), cplx(-0.5, 0.4)}) {
    std::span<const cplx> ws(&w, 1);
    CHECK(std::abs(evaluate(GL, ws) - pref * evaluate(K, ws)) < 1e-12);
  }
}

TEST_CASE("the constant 1 is not in C") {
  MultiplicitySetup s({0.5}, 1.0);
  double prev = 0.0;
  for (int D : {10, 20, 40, 80}) {
    double n2 = std::pow(c_norm(s, CoeffSeries::constant(1, D, 1.0)), 2);
    CHECK(n2 > prev + 0.5);
    prev = n2;
  }
}

TEST_CASE("generalized Hermite polynomials") {
  auto p0 = hermite_poly_values(0.0, 1.0, 2, 1.7);
  CHECK(p0[0] == doctest::Approx(1.0));
  CHECK(p0[2] == doctest::Approx((1.7 * 1.7 - 1.0) / std::sqrt(2.0)).epsilon(1e-14));
  auto p1 = hermite_poly_values(1.0, 1.0, 1, 0.9);
  CHECK(p1[1] == doctest::Approx(0.9 / std::sqrt(3.0)).epsilon(1e-14));
  MultiplicitySetup s({0.5, 1.5}, 2.0);
  auto basis = hermite_basis(s, 4);
  CHECK(basis.size() == 15);
  OmegaIntegrator integ(s, 30);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      CHECK(std::abs(l2_inner(integ, basis[i], basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("Gram-Schmidt bases") {
  MultiplicitySetup s0({0.0}, 1.0), s1({1.0}, 2.0);
  auto B0 = gs_orthonormal_basis({Space::B, s0}, 6, 10);
  for (int n = 0; n <= 6; ++n) {
    CHECK(max_coeff_diff(B0[n], (1.0 / std::sqrt(std::tgamma(n + 1.0))) * z_power(n, 10)) < 1e-14);
  }
  auto B1 = gs_orthonormal_basis({Space::B, s1}, 2, 10);
  CHECK(max_coeff_diff(B1[1], (1.0 / std::sqrt(6.0)) * z_power(1, 10)) < 1e-15);
  auto C1 = gs_orthonormal_basis({Space::C, s1}, 4, 40);
  CHECK(std::abs(c_inner(s1, C1[2], C1[0])) < 1e-12);
  CHECK(std::abs(c_inner(s1, C1[3], C1[3]) - 1.0) < 1e-12);
}

TEST_CASE("L2 dilations are unitary") {
  MultiplicitySetup s({1.0}, 1.0);
  OmegaIntegrator integ(s, 40);
  auto psi = gauss_times(2, 0.3);
  auto d = dilation_l2(s, 1.3, psi);
  CHECK(l2_norm(integ, d) == doctest::Approx(l2_norm(integ, psi)).epsilon(1e-12));
  double x = 0.5;
  CHECK(std::abs(d(x) - std::pow(1.3, 1.5) * psi(1.3 * x)) < 1e-15);
}
