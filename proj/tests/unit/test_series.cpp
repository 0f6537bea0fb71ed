#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "dunklsb/series.hpp"

using namespace dunklsb;

namespace {

CoeffSeries poly1(std::vector<cplx> c, int degree) {
  return CoeffSeries::from_coefficients(1, degree, [&](std::span<const int> n) {
    return n[0] < static_cast<int>(c.size()) ? c[n[0]] : cplx(0.0);
  });
}

CoeffSeries random_series(std::size_t dim, int degree, int live_deg, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  return CoeffSeries::from_coefficients(dim, degree, [&](std::span<const int> n) {
    int tot = 0;
    for (int v : n) tot += v;
    return tot <= live_deg ? cplx(g(rng), g(rng)) : cplx(0.0);
  });
}

}  // namespace

TEST_CASE("multi-index layout") {
  auto L = MultiIndexLayout::get(2, 3);
  CHECK(L->size() == 10);
  CHECK(L->degree_offset(2) == 3);
  int n[2] = {1, 2};
  long pos = L->find(n);
  REQUIRE(pos >= 0);
  CHECK(L->index(pos)[0] == 1);
  CHECK(L->index(pos)[1] == 2);
  int far[2] = {3, 3};
  CHECK(L->find(far) == -1);
  CHECK(MultiIndexLayout::get(2, 3) == L);
}

TEST_CASE("evaluate") {
  auto s = poly1({1.0, 2.0, 3.0}, 5);
  cplx i(0, 1);
  CHECK(std::abs(evaluate(s, std::span<const cplx>(&i, 1)) - cplx(-2.0, 2.0)) < 1e-15);
  double x = 2.0;
  CHECK(evaluate_real(s, std::span<const double>(&x, 1)) == cplx(17.0));
  int n[2] = {1, 1};
  auto m = CoeffSeries::monomial(2, 4, n, 2.0);
  std::vector<cplx> z{3.0, cplx(0, 1)};
  CHECK(std::abs(evaluate(m, z) - cplx(0, 6)) < 1e-15);
}

TEST_CASE("gaussian multiply") {
  auto one = CoeffSeries::constant(1, 12, 1.0);
  auto g = gaussian_multiply(one, 0.5);
  for (int m = 0; 2 * m <= 12; ++m) {
    int n = 2 * m;
    CHECK(std::abs(g.coeff(std::span<const int>(&n, 1)) - std::pow(0.5, m) / std::tgamma(m + 1.0)) < 1e-15);
    int o = n + 1;
    if (o <= 12) CHECK(g.coeff(std::span<const int>(&o, 1)) == cplx(0.0));
  }
  // z e^{-z^2}: odd coefficients (-1)^m / m!
  auto z = poly1({0.0, 1.0}, 15);
  auto h = gaussian_multiply(z, -1.0);
  for (int m = 0; 2 * m + 1 <= 15; ++m) {
    int n = 2 * m + 1;
    CHECK(std::abs(h.coeff(std::span<const int>(&n, 1)) - std::pow(-1.0, m) / std::tgamma(m + 1.0)) < 1e-15);
  }
  CHECK(h.tail_flag > 0.0);
}

TEST_CASE("opposite Gaussian factors cancel exactly") {
  auto f = random_series(2, 20, 20, 3);
  auto g = gaussian_multiply(f, cplx(0.3, 0.1));
  REQUIRE(g.gauss_factor() != nullptr);
  auto back = gaussian_multiply(g, cplx(-0.3, -0.1));
  CHECK(max_coeff_diff(back, f) == 0.0);
  CHECK(back.gauss_factor() == nullptr);
  // scaling and dilation keep the factor
  auto d = dilate_series(2.0 * g, 0.5);
  REQUIRE(d.gauss_factor() != nullptr);
  CHECK(std::abs(d.gauss_factor()->a - cplx(0.3, 0.1) * 0.25) < 1e-16);
  // mutation drops it
  d[0] += 1.0;
  CHECK(d.gauss_factor() == nullptr);
}

TEST_CASE("dilation") {
  auto s = poly1({1.0, 1.0, 1.0, 1.0}, 3);
  auto d = dilate_series(s, cplx(0, 2));
  CHECK(d[1] == cplx(0, 2));
  CHECK(d[2] == cplx(-4));
  CHECK(d[3] == cplx(0, -8));
}

TEST_CASE("G examples") {
  MultiplicitySetup s0({0.0}, 1.0), s1({1.0}, 1.0);
  auto one = CoeffSeries::constant(1, 30, 1.0);
  auto z = poly1({0.0, 1.0}, 30);
  for (cplx w : {cplx(0.3), cplx(-0.5, 0.7)}) {
    std::span<const cplx> ws(&w, 1);
    CHECK(std::abs(evaluate(g_map(s1, one), ws) - std::pow(2.0, 0.75) * std::exp(w * w)) < 1e-12);
    CHECK(std::abs(evaluate(g_map(s0, z), ws) - std::pow(2.0, 0.25) * 2.0 * w * std::exp(w * w)) < 1e-12);
    // G^{-1} 1 = 2^{-1/4} e^{-w^2/4}
    CHECK(std::abs(evaluate(g_inverse(s0, one), ws) - std::pow(2.0, -0.25) * std::exp(-w * w / 4.0)) < 1e-12);
  }
}

TEST_CASE("G round trips") {
  MultiplicitySetup s({0.5, 1.5}, 2.0);
  auto f = random_series(2, 30, 10, 11);
  CHECK(max_coeff_diff(g_inverse(s, g_map(s, f)), f) < 1e-10);
  CHECK(max_coeff_diff(g_map(s, g_inverse(s, f)), f) < 1e-10);
  // through materialized coefficients (no factor to cancel)
  MultiplicitySetup r({1.0}, 1.0);
  auto e = gaussian_multiply(CoeffSeries::constant(1, 40, 1.0), 0.125);
  CoeffSeries plain(e.layout_ptr());
  for (std::size_t i = 0; i < e.size(); ++i) plain[i] = e[i];
  auto back = resize_series(g_map(r, g_inverse(r, plain)), 20);
  CHECK(max_coeff_diff(back, resize_series(e, 20)) < 1e-9);
}

TEST_CASE("arithmetic and resizing") {
  auto a = poly1({1.0, 2.0}, 4), b = poly1({0.5, 0.0, 1.0}, 2);
  auto c = a + b;
  CHECK(c.degree() == 4);
  CHECK(c[2] == cplx(1.0));
  auto r = resize_series(c, 1);
  CHECK(r.size() == 2);
  CHECK(r.tail_flag == doctest::Approx(1.0));
  CHECK(max_coeff_abs(a - a) == 0.0);
  CHECK_THROWS_AS(a + CoeffSeries(2, 4), std::invalid_argument);
}
