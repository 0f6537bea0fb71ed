#pragma once

// Truncated Taylor series on C^N.  Coefficients are indexed by multi-indices
// of total degree <= D, ordered by degree.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dunklsb/setup.hpp"

namespace dunklsb {

using cplx = std::complex<double>;

class MultiIndexLayout {
 public:
  /// Shared instance for (dim, degree).
  static std::shared_ptr<const MultiIndexLayout> get(std::size_t dim, int degree);

  std::size_t dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return total_.size(); }

  std::span<const int> index(std::size_t i) const { return {alpha_.data() + i * dim_, dim_}; }
  int total_degree(std::size_t i) const { return total_[i]; }
  /// Position of multi-index n, or -1 if |n| > degree.
  long find(std::span<const int> n) const;
  /// Number of multi-indices of total degree < d (the start of degree d).
  std::size_t degree_offset(int d) const { return offsets_[d]; }

  MultiIndexLayout(std::size_t dim, int degree);

 private:
  std::size_t dim_;
  int degree_;
  std::vector<int> alpha_;
  std::vector<int> total_;
  std::vector<std::size_t> offsets_;
  std::vector<long> box_;  // (degree+1)^dim lookup
};

class CoeffSeries {
 public:
  CoeffSeries() = default;
  CoeffSeries(std::size_t dim, int degree);
  explicit CoeffSeries(std::shared_ptr<const MultiIndexLayout> layout);

  static CoeffSeries constant(std::size_t dim, int degree, cplx value);
  static CoeffSeries monomial(std::size_t dim, int degree, std::span<const int> n, cplx value = 1.0);
  /// Coefficient c_n = f(n) for every stored n.
  static CoeffSeries from_coefficients(std::size_t dim, int degree,
                                       const std::function<cplx(std::span<const int>)>& f);

  std::size_t dim() const { return layout_->dim(); }
  int degree() const { return layout_->degree(); }
  std::size_t size() const { return coeffs_.size(); }
  const MultiIndexLayout& layout() const { return *layout_; }
  const std::shared_ptr<const MultiIndexLayout>& layout_ptr() const { return layout_; }

  // Mutable access drops the Gaussian factor below.
  cplx& operator[](std::size_t i) {
    factor_.reset();
    return coeffs_[i];
  }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  /// Coefficient of z^n; zero if n is beyond the truncation.
  cplx coeff(std::span<const int> n) const;
  std::vector<cplx>& coefficients() {
    factor_.reset();
    return coeffs_;
  }
  const std::vector<cplx>& coefficients() const { return coeffs_; }

  /// Advisory: summed magnitude of coefficients discarded by truncations.
  double tail_flag = 0.0;

  /// When known, the series is the truncation of exp(a (z_1^2 + ... + z_N^2)) core.
  /// gaussian_multiply sets it and dilation and scaling keep it, so a later
  /// opposite factor (as in G after L_z) cancels in the exponent instead of
  /// through rounded coefficients.
  struct GaussFactor {
    cplx a;
    std::shared_ptr<const CoeffSeries> core;
  };
  const GaussFactor* gauss_factor() const { return factor_ ? &*factor_ : nullptr; }
  void set_gauss_factor(cplx a, CoeffSeries core);

  CoeffSeries& operator+=(const CoeffSeries& o);
  CoeffSeries& operator-=(const CoeffSeries& o);
  CoeffSeries& operator*=(cplx a);

 private:
  std::shared_ptr<const MultiIndexLayout> layout_;
  std::vector<cplx> coeffs_;
  std::optional<GaussFactor> factor_;
};

CoeffSeries operator+(CoeffSeries a, const CoeffSeries& b);
CoeffSeries operator-(CoeffSeries a, const CoeffSeries& b);
CoeffSeries operator*(cplx a, CoeffSeries s);

/// Re-truncate (or zero-pad) to a different degree cap.
CoeffSeries resize_series(const CoeffSeries& s, int degree);

/// max_n |a_n - b_n| over the union of stored indices.
double max_coeff_diff(const CoeffSeries& a, const CoeffSeries& b);
double max_coeff_abs(const CoeffSeries& s);

/// sum_n c_n z^n.
cplx evaluate(const CoeffSeries& s, std::span<const cplx> z);
cplx evaluate_real(const CoeffSeries& s, std::span<const double> x);

/// Product with exp(a (z_1^2 + ... + z_N^2)), formed at degree 2D and
/// truncated back to D; the discarded magnitude is added to tail_flag.
CoeffSeries gaussian_multiply(const CoeffSeries& s, cplx a);

/// (D_lambda f)(z) = f(lambda z): c_n -> lambda^{|n|} c_n.
CoeffSeries dilate_series(const CoeffSeries& s, cplx lambda);

/// G f(w) = 2^{(gamma+N/2)/2} f(2w) e^{w^2/t}.
CoeffSeries g_map(const MultiplicitySetup& setup, const CoeffSeries& s);

/// G^{-1} g(w) = 2^{-(gamma+N/2)/2} e^{-w^2/4t} g(w/2).
CoeffSeries g_inverse(const MultiplicitySetup& setup, const CoeffSeries& s);

}  // namespace dunklsb
