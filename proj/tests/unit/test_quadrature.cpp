#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <fstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "dunklsb/quadrature.hpp"

using namespace dunklsb;

TEST_CASE("Jacobi recurrence coefficients") {
  CHECK(jacobi_offdiagonals(0.0, 1.0, 3)[2] == 3.0);
  CHECK(jacobi_offdiagonals(1.0, 1.0, 1)[0] == 3.0);
  CHECK(jacobi_offdiagonals(1.0, 0.5, 2)[1] == 1.0);
}

TEST_CASE("tridiagonal eigensolver agrees with Eigen") {
  const int n = 30;
  auto beta = jacobi_offdiagonals(0.7, 1.3, n - 1);
  std::vector<double> d(n, 0.0), e(n - 1), first;
  for (int i = 0; i < n - 1; ++i) e[i] = std::sqrt(beta[i]);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) J(i, i + 1) = J(i + 1, i) = e[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  symmetric_tridiagonal_eigen(d, e, first);
  std::vector<std::pair<double, double>> ours;
  for (int i = 0; i < n; ++i) ours.push_back({d[i], first[i] * first[i]});
  std::sort(ours.begin(), ours.end());
  for (int i = 0; i < n; ++i) {
    CHECK(ours[i].first == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-12).scale(1.0));
    double v0 = es.eigenvectors()(0, i);
    CHECK(ours[i].second == doctest::Approx(v0 * v0).epsilon(1e-10).scale(1e-3));
  }
}

TEST_CASE("small Gauss rules") {
  auto r = gauss_rule_1d(0.0, 1.0, 1);
  CHECK(r.nodes[0] == 0.0);
  CHECK(r.weights[0] == doctest::Approx(1.0));
  r = gauss_rule_1d(0.0, 1.0, 2);
  CHECK(r.nodes[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  r = gauss_rule_1d(1.0, 1.0, 2);
  CHECK(r.nodes[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tensor rules") {
  auto r = tensor_rule(MultiplicitySetup({0.0, 0.0}, 1.0), 1);
  CHECK(r.size() == 1);
  CHECK(r.nodes[0] == 0.0);
  CHECK(r.nodes[1] == 0.0);
  CHECK(r.weights[0] == doctest::Approx(1.0));
  r = tensor_rule(MultiplicitySetup({0.0, 1.0}, 1.0), 2);
  CHECK(r.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(r.node(i)[0]) == doctest::Approx(1.0));
    CHECK(std::abs(r.node(i)[1]) == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.weights[i] == doctest::Approx(0.25));
  }
  r = tensor_rule(MultiplicitySetup({0.5, 1.0, 2.0}, 1.0), 20);
  double sum = 0.0;
  for (double w : r.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(tensor_rule(MultiplicitySetup({0.5, 1.0, 2.0}, 1.0), 300), std::length_error);
}

TEST_CASE("integrate") {
  auto r = gauss_rule_1d(1.0, 1.0, 10);
  CHECK(integrate(r, [](std::span<const double>) { return cplx(1.0); }).real() == doctest::Approx(1.0));
  CHECK(integrate_real(r, [](std::span<const double> q) { return q[0] * q[0]; }) == doctest::Approx(3.0).epsilon(1e-14));
  // series of moments: sum (-1/2t)^j m_2j / j! = 2^{-(k+1/2)}
  auto r60 = gauss_rule_1d(1.0, 1.0, 60);
  double v = integrate_real(r60, [](std::span<const double> q) { return std::exp(-q[0] * q[0] / 2.0); });
  CHECK(v == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-13));
  CHECK_THROWS_WITH(integrate_real(r, [](std::span<const double> q) -> double {
                      if (q[0] > 0) throw std::runtime_error("boom");
                      return 0.0;
                    }),
                    doctest::Contains("node"));
}

TEST_CASE("moment oracle") {
  CHECK(moment_oracle(0.3, 2.0, 0) == 1.0);
  CHECK(moment_oracle(1.0, 1.0, 1) == doctest::Approx(3.0));
  CHECK(moment_oracle(1.0, 1.0, 2) == doctest::Approx(15.0));
  CHECK(moment_oracle(0.0, 1.0, 2) == doctest::Approx(3.0));
}

TEST_CASE("exactness through degree 2n-1") {
  for (double k : {0.0, 0.5, 1.0, 2.5, 1.5})
    for (double t : {0.5, 1.0, 2.0})
      for (int n : {5, 10, 20, 40}) {
        auto r = gauss_rule_1d(k, t, n);
        for (int j = 0; 2 * j <= 2 * n - 1; ++j) {
          double s = integrate_real(r, [&](std::span<const double> q) { return std::pow(q[0], 2 * j); });
          CHECK(std::abs(s / moment_oracle(k, t, j) - 1.0) < 1e-11);
        }
      }
}

TEST_CASE("log Christoffel weights match the stored weights where those are normal") {
  auto r = gauss_rule_1d(1.5, 1.0, 120);
  auto lw = log_christoffel_weights(r);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r.weights[i] > 1e-250) CHECK(std::exp(lw[i]) == doctest::Approx(r.weights[i]).epsilon(1e-9));
}

TEST_CASE("rule cache files") {
  auto dir = std::filesystem::temp_directory_path() / "dunklsb_test_cache";
  std::filesystem::remove_all(dir);
  CHECK(RuleCache::file_name(0.5, 2.0, 17).string() == "q_0.5_2_17.json");
  auto& cache = RuleCache::global();
  cache.set_directory(dir);
  auto a = cache.get(0.5, 2.0, 17);
  auto path = dir / RuleCache::file_name(0.5, 2.0, 17);
  REQUIRE(std::filesystem::exists(path));
  std::ifstream f(path);
  auto j = nlohmann::json::parse(f);
  CHECK(j["schema"] == "quadrule/1");
  CHECK(j["n"] == 17);
  auto b = RuleCache::load(path);
  for (std::size_t i = 0; i < a->size(); ++i) {
    CHECK(a->nodes[i] == b.nodes[i]);
    CHECK(a->weights[i] == b.weights[i]);
  }
  cache.clear();
  cache.set_directory(std::nullopt);
  std::filesystem::remove_all(dir);
}

TEST_CASE("omega integrator with a matched envelope") {
  MultiplicitySetup s({1.0}, 2.0);
  OmegaIntegrator integ(s, 40);
  // int domega_t e^{-q^2/2t} q^2 = (2t)(k+1/2), using the rule for envelope 1/(3t)
  cplx v = integ.integrate(1.0 / 6.0, [](std::span<const double> q) {
    return cplx(q[0] * q[0] * std::exp(-q[0] * q[0] * (0.25 - 1.0 / 6.0)));
  });
  CHECK(v.real() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(integ.integrate(0.0, [](std::span<const double>) { return cplx(1.0); }), std::invalid_argument);
}
