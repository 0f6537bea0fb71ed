#pragma once

// L^2(omega_{mu,t}), the Version-A space B_{mu,t} with kernel K_{mu,t}, and the
// Version-C space C_{mu,t} with kernel L_{mu,t}.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dunklsb/quadrature.hpp"
#include "dunklsb/series.hpp"
#include "dunklsb/setup.hpp"

namespace dunklsb {

using cplx = std::complex<double>;

/// psi(q) = exp(-envelope |q|^2) core(q).  The envelope is carried explicitly
/// so integrals can use a Gauss rule matched to the decay.  When `factors` is
/// non-empty, core(q) = prod_j factors[j](q_j) and integrals split by axis.
struct SampledFunction {
  std::function<cplx(std::span<const double>)> core;
  double envelope = 0.0;
  std::string label;
  std::vector<std::function<cplx(double)>> factors;

  cplx operator()(std::span<const double> q) const;
  cplx operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }
  bool separable() const { return !factors.empty(); }
};

SampledFunction make_sampled(std::string label, std::function<cplx(std::span<const double>)> core,
                             double envelope = 0.0);
SampledFunction make_separable(std::string label, std::vector<std::function<cplx(double)>> factors,
                               double envelope = 0.0);
/// a f + b g (the result is not separable unless one term is zero).
SampledFunction combine(cplx a, const SampledFunction& f, cplx b, const SampledFunction& g);
SampledFunction linear_combination(const std::vector<cplx>& c, const std::vector<SampledFunction>& fs);

enum class Space { L2, B, C };

struct SpaceTag {
  Space which;
  MultiplicitySetup setup;
};

/// int domega_t conj(f) g.  Throws std::invalid_argument when the product has
/// no decaying Gaussian envelope.
cplx l2_inner(const OmegaIntegrator& integ, const SampledFunction& f, const SampledFunction& g);
double l2_norm(const OmegaIntegrator& integ, const SampledFunction& f);

/// Diagonal weights s^{|n|} prod_j gamma_{n_j}(k_j) of B_{mu,s} for a layout.
std::vector<double> b_weights(const MultiplicitySetup& setup_s, const MultiIndexLayout& layout);

/// sum_n conj(f_n) g_n s^{|n|} prod gamma_{n_j}(k_j), s = setup_s.t().
cplx b_inner(const MultiplicitySetup& setup_s, const CoeffSeries& f, const CoeffSeries& g);
double b_norm(const MultiplicitySetup& setup_s, const CoeffSeries& f);

/// w -> K_{mu,s}(z, w) = E_mu(conj(z)/sqrt(s), w/sqrt(s)).
CoeffSeries b_kernel(const MultiplicitySetup& setup_s, std::span<const cplx> z, int degree);

struct InnerWithTail {
  cplx value;
  double tail;
};

/// <Gf, Gg> in B_{mu,t/2}.
cplx c_inner(const MultiplicitySetup& setup, const CoeffSeries& f, const CoeffSeries& g);
InnerWithTail c_inner_detailed(const MultiplicitySetup& setup, const CoeffSeries& f,
                               const CoeffSeries& g);
double c_norm(const MultiplicitySetup& setup, const CoeffSeries& f);

/// w -> L_z(w) = 2^{-(gamma+N/2)} rho_{mu,2t}(conj(z), w).
CoeffSeries c_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, int degree);

/// Generalized Hermite functions p_n(q) = P_n(q) e^{-q^2/4t}, P_n the
/// orthonormal polynomials of e^{-q^2/2t} domega_t; tensor products of total
/// degree <= max_deg for N > 1, ordered by degree.
std::vector<SampledFunction> hermite_basis(const MultiplicitySetup& setup, int max_deg);

/// P_0(x) .. P_J(x) for one coordinate.
std::vector<double> hermite_poly_values(double k, double t, int J, double x);

/// Gram-Schmidt (modified, two passes) on the generating family of degree <=
/// max_deg: monomials z^n for B, e^{-z^2/4t} z^n for C.  Series are stored to
/// degree `degree`.  Throws std::runtime_error when a pivot drops below 1e-12.
std::vector<CoeffSeries> gs_orthonormal_basis(const SpaceTag& space, int max_deg, int degree);

/// Orthonormalization of coefficient vectors under a diagonal weight.
std::vector<CoeffSeries> weighted_gram_schmidt(std::vector<CoeffSeries> family,
                                               const std::vector<double>& weights);

/// lambda^{gamma+N/2} psi(lambda .).
SampledFunction dilation_l2(const MultiplicitySetup& setup, double lambda, const SampledFunction& psi);

}  // namespace dunklsb
