#pragma once

// Root-system context for the reflection group Z_2^N: multiplicities, Planck
// constant, the weight omega_{mu,t} and the Macdonald-Mehta-Selberg constant.

#include <cstddef>
#include <span>
#include <vector>

namespace dunklsb {

/// Multiplicity data for R = {±e_1, ..., ±e_N} with mu(±e_j) = k_j, together
/// with Planck's constant t.  Immutable after construction.
class MultiplicitySetup {
 public:
  /// Throws std::invalid_argument unless k is non-empty, every k_j >= 0 and t > 0.
  MultiplicitySetup(std::vector<double> k, double t);

  static MultiplicitySetup rank_one(double k, double t) { return MultiplicitySetup({k}, t); }

  std::size_t dim() const { return k_.size(); }
  std::span<const double> k() const { return k_; }
  double k(std::size_t j) const { return k_[j]; }
  double t() const { return t_; }

  /// Same multiplicities, different time parameter.
  MultiplicitySetup at_time(double s) const { return MultiplicitySetup(k_, s); }

  bool operator==(const MultiplicitySetup&) const = default;

 private:
  std::vector<double> k_;
  double t_;
};

/// gamma_mu = (1/2) sum_{alpha in R} mu(alpha) = sum_j k_j.
double gamma_mu(const MultiplicitySetup& setup);

/// gamma_mu + N/2, the homogeneity degree of omega_{mu,t} d^N q.  Appears in
/// every dilation and normalisation factor.
double homogeneity(const MultiplicitySetup& setup);

/// c_mu = prod_j 2^{k_j + 1/2} Gamma(k_j + 1/2).  Independent of t.
double mms_constant(const MultiplicitySetup& setup);

/// omega_{mu,t}(q) = c_mu^{-1} t^{-(gamma_mu + N/2)} prod_j |q_j|^{2 k_j}.
/// Throws std::invalid_argument on a dimension mismatch.
double weight_density(const MultiplicitySetup& setup, std::span<const double> q);

/// Numerical value of the defining integral
///   int d^N x t^{-(gamma+N/2)} e^{-x^2/2t} prod_j |x_j|^{2k_j},
/// evaluated coordinate-wise by double-exponential quadrature on the half
/// line.  This path shares nothing with mms_constant and is used to check it.
double mms_constant_check(const MultiplicitySetup& setup);

/// int domega_{mu,t}(q) e^{-q^2/2t}, evaluated with the same independent
/// half-line quadrature.  Equals 1 when c_mu is right.
double gaussian_mass_check(const MultiplicitySetup& setup);

}  // namespace dunklsb
