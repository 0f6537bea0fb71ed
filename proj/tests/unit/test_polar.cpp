#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "dunklsb/polar.hpp"
#include "dunklsb/spaces.hpp"

using namespace dunklsb;
using Eigen::MatrixXcd;

namespace {

double orth_dev(const MatrixXcd& Q) {
  return (Q.adjoint() * Q - MatrixXcd::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("svd of small matrices") {
  MatrixXcd D = MatrixXcd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 3.0;
  auto r = svd(D);
  CHECK(r.sigma(0) == doctest::Approx(3.0));
  CHECK(r.sigma(1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(polar_factor(MatrixXcd::Zero(3, 3)), RankDeficientError);
}

TEST_CASE("svd against Eigen's JacobiSVD") {
  Eigen::MatrixXd A(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) A(i, j) = std::sin(1.0 + i * 7 + j * j) + (i == j ? 2.0 : 0.0);
  auto r = svd(A.cast<cplx>());
  Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
  for (int i = 0; i < 6; ++i) CHECK(r.sigma(i) == doctest::Approx(ref.singularValues()(i)).epsilon(1e-13));
}

TEST_CASE("complex and rectangular reconstruction") {
  MatrixXcd M(7, 4);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = cplx(std::cos(i + 3.0 * j), std::sin(2.0 * i - j));
  for (const MatrixXcd& A : {M, MatrixXcd(M.adjoint())}) {
    auto r = svd(A);
    MatrixXcd back = r.U * r.sigma.asDiagonal() * r.V.adjoint();
    CHECK((back - A).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(orth_dev(r.U) < 1e-13);
    CHECK(orth_dev(r.V) < 1e-13);
    for (Eigen::Index i = 1; i < r.sigma.size(); ++i) CHECK(r.sigma(i) <= r.sigma(i - 1));
  }
}

TEST_CASE("polar factors") {
  MatrixXcd D = MatrixXcd::Zero(3, 3);
  D.diagonal() << 2.0, 5.0, 0.5;
  CHECK((polar_factor(D) - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  MatrixXcd Rot(2, 2);
  const double a = 0.7;
  Rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  MatrixXcd P(2, 2);
  P << 2.0, 0.5, 0.5, 1.0;  // positive definite
  CHECK((polar_factor(Rot * P) - Rot).cwiseAbs().maxCoeff() < 1e-14);
  MatrixXcd M(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = cplx(1.0 / (i + j + 1.0), 0.1 * (i - j));
  auto W = polar_factor(M);
  CHECK(orth_dev(W) < 1e-13);
  CHECK((polar_factor(cplx(4.5) * M) - W).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("operator matrix of the identity is the identity") {
  MultiplicitySetup s({1.0}, 1.0);
  OmegaIntegrator integ(s, 40);
  auto basis = hermite_basis(s, 5);
  std::function<SampledFunction(const SampledFunction&)> id = [](const SampledFunction& f) { return f; };
  std::function<cplx(const SampledFunction&, const SampledFunction&)> pair =
      [&](const SampledFunction& f, const SampledFunction& g) { return l2_inner(integ, f, g); };
  auto M = operator_matrix(id, basis, basis, pair, pair);
  CHECK((M.M - MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(M.domain_gram_dev < 1e-12);
}

TEST_CASE("harness matrices") {
  MultiplicitySetup s({0.0}, 1.0);
  auto H = harness_matrices(s, 8, 16, 2, 80);
  // <p_0, e^{2t Delta} p_0> for p_0 = e^{-q^2/4t}
  CHECK(std::abs(H.heat(0, 0) - std::sqrt(2.0 / 3.0)) < 1e-12);
  for (Eigen::Index i = 0; i < H.rstar.rows(); ++i)
    for (Eigen::Index j = 0; j < H.rstar.cols(); ++j)
      if ((i + j) % 2) CHECK(std::abs(H.rstar(i, j)) < 1e-12);
}

TEST_CASE("restriction report basics") {
  MultiplicitySetup s({1.0}, 1.0);
  RestrictionOptions o;
  o.max_deg = 6;
  o.degree = 24;
  auto a = verify_restriction_principle(s, o);
  CHECK(a.sigma_max <= 1.0 + 1e-8);
  CHECK(a.cross_parity_max < 1e-12);
  CHECK(a.c_isometry_dev < 1e-4);  // D = 24 is still truncation-limited
  o.degree = 32;
  auto b = verify_restriction_principle(s, o);
  CHECK(b.u_minus_c < a.u_minus_c);
  CHECK(b.c_isometry_dev < a.c_isometry_dev);
}

TEST_CASE("norm probe") {
  for (double k : {0.0, 1.0}) {
    MultiplicitySetup s({k}, 1.0);
    double prev = 0.0;
    for (double w : {2.0, 5.0, 20.0}) {
      auto p = operator_norm_probe(s, w, 600);
      CHECK(p.quotient <= 1.0 + 1e-10);
      CHECK(p.quotient > prev);
      CHECK(p.quotient == doctest::Approx(std::pow(1.0 + 1.0 / (w * w), -(k + 0.5))).epsilon(1e-8));
      prev = p.quotient;
    }
    CHECK(prev >= 0.99);
  }
}
