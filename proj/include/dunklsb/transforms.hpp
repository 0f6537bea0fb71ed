#pragma once

// Integral operators between L^2(omega_{mu,t}), B_{mu,t} and C_{mu,t}.

#include <complex>
#include <span>
#include <vector>

#include "dunklsb/kernel.hpp"
#include "dunklsb/quadrature.hpp"
#include "dunklsb/series.hpp"
#include "dunklsb/spaces.hpp"

namespace dunklsb {

/// Options for kernels evaluated inside quadratures, where |x q|/s can reach
/// the hundreds.
KernelEvalOptions quadrature_kernel_options();

/// A_{mu,t}(z, q) = exp(-z^2/2t - q^2/4t) E_mu(z/sqrt(t), q/sqrt(t)).
cplx a_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, std::span<const double> q);

/// M_n = int domega_t(q) e^{-extra |q|^2} q^n psi(q) for |n| <= degree.
CoeffSeries moment_series(const OmegaIntegrator& integ, const SampledFunction& psi, double extra,
                          int degree);

/// Version-A transform as a Taylor series of degree `degree`.
CoeffSeries transform_A(const OmegaIntegrator& integ, const SampledFunction& psi, int degree);
/// Version-C transform (kernel rho_{mu,t}) as a Taylor series.
CoeffSeries transform_C(const OmegaIntegrator& integ, const SampledFunction& psi, int degree);

/// Per-point quadrature of the same integrals; used as an independent path.
cplx transform_A_at(const OmegaIntegrator& integ, const SampledFunction& psi, std::span<const cplx> z);
cplx transform_C_at(const OmegaIntegrator& integ, const SampledFunction& psi, std::span<const cplx> z);

/// x -> int domega_s(q) rho_{mu,s}(x, q) psi(q).  The integrator's own time is
/// ignored; rules for time s are drawn with the same node count.
SampledFunction heat_apply(const OmegaIntegrator& integ, double s, const SampledFunction& psi);

/// x -> int domega_s(q) E_mu(-i x/sqrt(s), q/sqrt(s)) phi(q).
SampledFunction dunkl_transform(const OmegaIntegrator& integ, double s, const SampledFunction& phi);

/// Restriction to R^N.
SampledFunction restrict(const CoeffSeries& s);

/// R* psi(z) = int domega_{2t}(q) rho_{mu,2t}(z, q) psi(q), computed from the
/// time-t measure as
///   2^{-(gamma+N/2)} e^{-z^2/4t} sum_n z^n/((2t)^{|n|} gamma_n) int domega_t e^{-q^2/4t} q^n psi.
CoeffSeries restrict_adjoint(const OmegaIntegrator& integ_t, const SampledFunction& psi, int degree);

/// F_1 psi(x) = 2^{-(gamma+N/2)/2} psi(x/sqrt 2), and its adjoint (= inverse).
SampledFunction f1_op(const MultiplicitySetup& setup, const SampledFunction& psi);
SampledFunction f1_adjoint(const MultiplicitySetup& setup, const SampledFunction& psi);

/// F_2 f(z) = 2^{(gamma+N/2)/2} e^{z^2/2t} f(sqrt 2 z), and its adjoint (= inverse)
///   F_2^* g(w) = 2^{-(gamma+N/2)/2} e^{-w^2/4t} g(w/sqrt 2).
CoeffSeries f2_op(const MultiplicitySetup& setup, const CoeffSeries& f);
CoeffSeries f2_adjoint(const MultiplicitySetup& setup, const CoeffSeries& g);

/// F_1 R F_2^* f(x) = 2^{-(gamma+N/2)} e^{-x^2/8t} f(x/2).
SampledFunction not_restriction_op(const MultiplicitySetup& setup, const CoeffSeries& f);

/// S* f(x) = c_mu^{-1/2} e^{-x^2/2} f(x).  Throws std::invalid_argument unless t = 1.
SampledFunction sbso_adjoint(const MultiplicitySetup& setup, const CoeffSeries& f);

struct DiagramReport {
  double max_coeff_err = 0.0;
  double max_point_err = 0.0;
  double scale = 0.0;  // max |coefficient| of A psi
};

/// Compares A psi with F_2 C F_1^* psi, coefficientwise and at the given points.
DiagramReport diagram_check(const OmegaIntegrator& integ, const SampledFunction& psi, int degree,
                            const std::vector<std::vector<cplx>>& points);

/// max |C(sqrt2 z, q) - e^{-z^2/2t} A(z, sqrt2 q)| / max(1, |C|) over the grid.
double ca_relation_check(const MultiplicitySetup& setup, const std::vector<std::vector<cplx>>& zs,
                         const std::vector<std::vector<double>>& qs);

struct KernelIdentityReport {
  double a_over_rho_err = 0.0;   // A = rho / sqrt(rho(0, .)), relative
  double k_integral_err = 0.0;   // K via the heat-kernel integral, relative
};

KernelIdentityReport kernel_identities_check(const OmegaIntegrator& integ,
                                             const std::vector<std::vector<cplx>>& zs,
                                             const std::vector<std::vector<cplx>>& ws,
                                             const std::vector<std::vector<double>>& qs);

}  // namespace dunklsb
