#pragma once

// Dunkl kernel E_mu and heat kernel rho_{mu,s} for Z_2^N.  The kernel factors
// over coordinates; each rank-one factor is the entire series
//   E_k(u) = sum_n u^n / gamma_n(k).

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "dunklsb/setup.hpp"

namespace dunklsb {

using cplx = std::complex<double>;

struct KernelEvalOptions {
  int max_terms = 200;
  double tail_tol = 1e-16;

  /// Throws std::invalid_argument when max_terms < 8 or tail_tol <= 0.
  void validate() const;
};

/// Raised when the series tail is still above tolerance after max_terms.
class KernelConvergenceError : public std::runtime_error {
 public:
  KernelConvergenceError(double tail_estimate, int terms);
  double tail_estimate() const { return tail_; }
  int terms() const { return terms_; }

 private:
  double tail_;
  int terms_;
};

/// gamma_n(k): gamma_{2m} = 2^{2m} m! (k+1/2)_m, gamma_{2m+1} = 2^{2m+1} m! (k+1/2)_{m+1}.
/// Equivalently prod_{j=1..n} (j + 2k [j odd]).  Throws std::overflow_error when
/// the value is not representable as a double.
double gamma_factor(double k, int n);

/// log gamma_n(k), valid for any n.
double log_gamma_factor(double k, int n);

/// mantissa * exp(log_scale); lets kernels with |u| in the thousands be
/// combined with Gaussian prefactors without overflow.
struct ScaledValue {
  cplx mantissa{1.0, 0.0};
  double log_scale = 0.0;

  cplx value() const;
  /// value() * exp(shift), with the shift folded in before exponentiating.
  cplx value_shifted(cplx shift) const;
};

/// Rank-one series E_k(u).
ScaledValue rank_one_kernel_scaled(double k, cplx u, const KernelEvalOptions& opts = {});
double rank_one_kernel_real(double k, double u, const KernelEvalOptions& opts = {});

/// E_mu(z, w) = prod_j E_{k_j}(z_j w_j).
cplx dunkl_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, std::span<const cplx> w,
                  const KernelEvalOptions& opts = {});
ScaledValue dunkl_kernel_scaled(const MultiplicitySetup& setup, std::span<const cplx> z,
                                std::span<const cplx> w, const KernelEvalOptions& opts = {});

/// rho_{mu,s}(z, w) = exp(-(z^2 + w^2)/2s) E_mu(z/sqrt(s), w/sqrt(s)), with z^2 the
/// holomorphic square sum.
cplx heat_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, std::span<const cplx> w,
                 double s, const KernelEvalOptions& opts = {});

/// Real-argument heat kernel, the hot path of every quadrature.
double heat_kernel_real(const MultiplicitySetup& setup, std::span<const double> x,
                        std::span<const double> q, double s, const KernelEvalOptions& opts = {});

/// exp(|z| |w|) - |E_mu(z, w)|.
double kernel_bound_margin(const MultiplicitySetup& setup, std::span<const cplx> z,
                           std::span<const cplx> w, const KernelEvalOptions& opts = {});

/// prod_j E_{k_j}(|z_j| |w_j|): the size of the largest series terms, used as
/// the scale for relative errors when the series cancels.
double kernel_magnitude(const MultiplicitySetup& setup, std::span<const cplx> z,
                        std::span<const cplx> w, const KernelEvalOptions& opts = {});

}  // namespace dunklsb
