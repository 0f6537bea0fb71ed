#pragma once

// Truncated operator matrices, one-sided Jacobi SVD, polar factors, and the
// restriction-principle comparison between the polar factor of [R*] and [C].

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dunklsb/quadrature.hpp"
#include "dunklsb/setup.hpp"

namespace dunklsb {

using cplx = std::complex<double>;

struct OperatorMatrix {
  Eigen::MatrixXcd M;
  std::string domain_label;
  std::string codomain_label;
  double domain_gram_dev = 0.0;    // max |<e_i,e_j> - delta_ij| of the domain basis
  double codomain_gram_dev = 0.0;  // same for the codomain basis
};

/// M_ij = pairing(codomain_i, op(domain_j)).  Gram deviations of both bases
/// are measured with the given pairings and attached.
template <class Dom, class Cod>
OperatorMatrix operator_matrix(const std::function<Cod(const Dom&)>& op,
                               const std::vector<Dom>& domain, const std::vector<Cod>& codomain,
                               const std::function<cplx(const Cod&, const Cod&)>& pairing,
                               const std::function<cplx(const Dom&, const Dom&)>& domain_pairing) {
  OperatorMatrix out;
  out.M.resize(static_cast<Eigen::Index>(codomain.size()), static_cast<Eigen::Index>(domain.size()));
  for (std::size_t j = 0; j < domain.size(); ++j) {
    Cod image = op(domain[j]);
    for (std::size_t i = 0; i < codomain.size(); ++i) out.M(i, j) = pairing(codomain[i], image);
  }
  for (std::size_t i = 0; i < domain.size(); ++i)
    for (std::size_t j = 0; j < domain.size(); ++j)
      out.domain_gram_dev = std::max(
          out.domain_gram_dev, std::abs(domain_pairing(domain[i], domain[j]) - cplx(i == j ? 1.0 : 0.0)));
  for (std::size_t i = 0; i < codomain.size(); ++i)
    for (std::size_t j = 0; j < codomain.size(); ++j)
      out.codomain_gram_dev = std::max(
          out.codomain_gram_dev, std::abs(pairing(codomain[i], codomain[j]) - cplx(i == j ? 1.0 : 0.0)));
  return out;
}

struct SvdResult {
  Eigen::MatrixXcd U;      // m x r, orthonormal columns
  Eigen::VectorXd sigma;   // r, nonincreasing
  Eigen::MatrixXcd V;      // n x r, orthonormal columns
  int sweeps = 0;
};

class SvdConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(double sigma_min, double sigma_max);
  double sigma_min;
  double sigma_max;
};

/// Thin SVD by one-sided Jacobi (Hestenes) after a Householder QR; real
/// arithmetic is used when M has no imaginary part.
SvdResult svd(const Eigen::MatrixXcd& M);

/// U V^* from the SVD.  Throws RankDeficientError when sigma_min <= 1e-12 sigma_max.
Eigen::MatrixXcd polar_factor(const Eigen::MatrixXcd& M);

struct RestrictionOptions {
  int max_deg = 10;     // compared block: domain functions of degree <= max_deg
  int degree = 40;      // codomain truncation D
  int domain_deg = -1;  // domain truncation; -1 means degree - 8
  int nodes = 80;
};

struct RestrictionReport {
  double u_minus_c = 0.0;         // max |W - [C]| over the compared columns
  double rrstar_minus_heat = 0.0; // max |[R][R*] - [e^{t Delta}]| on the compared block
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double c_isometry_dev = 0.0;    // max |[C]^*[C] - I| on the compared block
  double literal_u_minus_c = -1.0;  // domain max_deg, codomain max_deg + 8 (-1 if rank deficient)
  double cross_parity_max = 0.0;  // largest entry of [R*] pairing opposite parities
  long domain_size = 0;
  long codomain_size = 0;
  long compared_columns = 0;
  bool rank_deficient = false;
};

RestrictionReport verify_restriction_principle(const MultiplicitySetup& setup,
                                               const RestrictionOptions& opts = {});

/// Matrices used by the harness, exposed for tests: [R*] and [C] from the
/// Hermite functions of degree <= domain_deg to the orthonormal C-basis of
/// degree <= degree, and [e^{t Delta}] on the Hermite functions of degree <= heat_deg.
struct HarnessMatrices {
  Eigen::MatrixXcd rstar;
  Eigen::MatrixXcd c;
  Eigen::MatrixXcd heat;
  double codomain_gram_dev = 0.0;
};
HarnessMatrices harness_matrices(const MultiplicitySetup& setup, int domain_deg, int degree,
                                 int heat_deg, int nodes);

struct ProbeResult {
  double quotient = 0.0;
  double node_span = 0.0;  // largest node of the inner rule
  int inner_nodes = 0;
  bool warned = false;
};

/// <psi, e^{t Delta} psi> / |psi|^2 for psi = exp(-|x|^2 / 2 width^2), by nested
/// quadrature with at least `nodes` points per axis.  The inner rule is grown
/// until it spans the outer integrand; a warning is printed to stderr if the
/// requested rule spans less than 4 width.
ProbeResult operator_norm_probe(const MultiplicitySetup& setup, double width, int nodes = 600);

}  // namespace dunklsb
