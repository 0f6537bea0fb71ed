#pragma once

// Gauss rules for the probability measure
//   nu_{k,t}(dq) = e^{-q^2/2t} domega_{k,t}(q)
// built by Golub-Welsch from the closed-form generalized-Hermite recurrence,
// their tensor products, and integration against omega_{mu,t} itself.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dunklsb/setup.hpp"

namespace dunklsb {

using cplx = std::complex<double>;

/// Nodes are stored flat, row-major: node i occupies nodes[i*dim .. i*dim+dim).
struct QuadratureRule {
  std::size_t dim = 1;
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;          // nodes per dimension
  std::vector<double> k;  // per-dimension multiplicity
  double t = 1.0;

  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const { return {nodes.data() + i * dim, dim}; }
};

/// beta_1..beta_n, beta_m = t (m + 2k [m odd]).
std::vector<double> jacobi_offdiagonals(double k, double t, int n);

/// Eigenvalues and first eigenvector components of the symmetric tridiagonal
/// matrix with zero-based diagonal d and off-diagonal e (size n-1), by implicit
/// QL.  Throws std::runtime_error if an eigenvalue needs more than 60 sweeps.
void symmetric_tridiagonal_eigen(std::vector<double>& d, std::vector<double> e,
                                 std::vector<double>& first_row);

/// n-point Gauss rule for nu_{k,t}; nodes ascending, exactly symmetric.
QuadratureRule gauss_rule_1d(double k, double t, int n);

/// log of the Christoffel numbers 1 / sum_m P_m(x_i)^2 of a 1-D rule, computed
/// with rescaled recurrences.  Unlike the stored weights these do not
/// underflow at the outer nodes of large rules.
std::vector<double> log_christoffel_weights(const QuadratureRule& rule);

/// Tensor product of per-coordinate 1-D rules at time setup.t().
/// Throws std::length_error beyond 10^7 nodes.
QuadratureRule tensor_rule(const MultiplicitySetup& setup, int n_per_dim);

/// sum_i w_i f(x_i).  Evaluation failures are rethrown with the node index.
cplx integrate(const QuadratureRule& rule, const std::function<cplx(std::span<const double>)>& f);
double integrate_real(const QuadratureRule& rule,
                      const std::function<double(std::span<const double>)>& f);

/// int q^{2j} dnu_{k,t} = (2t)^j (k + 1/2)_j.
double moment_oracle(double k, double t, int j);

/// Thread-safe memo of 1-D rules, optionally persisted as JSON files
///   {schema: "quadrule/1", k, t, n, nodes[], weights[]}
/// named q_<k>_<t>_<n>.json.  Files are written to a temporary name and renamed.
class RuleCache {
 public:
  static RuleCache& global();

  std::shared_ptr<const QuadratureRule> get(double k, double t, int n);
  void set_directory(std::optional<std::filesystem::path> dir);
  std::optional<std::filesystem::path> directory() const;
  void clear();

  static std::filesystem::path file_name(double k, double t, int n);
  static void save(const QuadratureRule& rule, const std::filesystem::path& path);
  static QuadratureRule load(const std::filesystem::path& path);

 private:
  struct Impl;
  RuleCache();
  std::shared_ptr<Impl> impl_;
};

/// Integration against domega_{mu,t} (no Gaussian factor).  An integrand with
/// Gaussian envelope e^{-b|q|^2} is handled by the nu_T rule with T = 1/(2b):
///   int domega_t e^{-b q^2} g(q) = (T/t)^{gamma+N/2} int dnu_T g.
class OmegaIntegrator {
 public:
  OmegaIntegrator(MultiplicitySetup setup, int nodes_per_dim);

  const MultiplicitySetup& setup() const { return setup_; }
  int nodes_per_dim() const { return n_; }
  OmegaIntegrator at_time(double s) const { return OmegaIntegrator(setup_.at_time(s), n_); }
  OmegaIntegrator with_nodes(int n) const { return OmegaIntegrator(setup_, n); }

  /// Per-coordinate rule and the scalar factor (T/t)^{k_j+1/2}.
  struct AxisRule {
    std::shared_ptr<const QuadratureRule> rule;
    double factor;
  };
  AxisRule axis_rule(std::size_t j, double envelope) const;

  /// Tensor rule with weights multiplied by (T/t)^{gamma+N/2}.
  QuadratureRule weighted_rule(double envelope) const;

  /// int domega_t(q) e^{-envelope |q|^2} g(q); envelope must be > 0.
  cplx integrate(double envelope, const std::function<cplx(std::span<const double>)>& g) const;

 private:
  MultiplicitySetup setup_;
  int n_;
};

}  // namespace dunklsb
