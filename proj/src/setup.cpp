#include "dunklsb/setup.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dunklsb {

MultiplicitySetup::MultiplicitySetup(std::vector<double> k, double t) : k_(std::move(k)), t_(t) {
  if (k_.empty()) throw std::invalid_argument("MultiplicitySetup: dimension must be >= 1");
  for (double kj : k_) {
    if (!(kj >= 0.0) || !std::isfinite(kj))
      throw std::invalid_argument("MultiplicitySetup: multiplicities must be finite and >= 0");
  }
  if (!(t_ > 0.0) || !std::isfinite(t_))
    throw std::invalid_argument("MultiplicitySetup: t must be finite and > 0");
}

double gamma_mu(const MultiplicitySetup& setup) {
  return std::accumulate(setup.k().begin(), setup.k().end(), 0.0);
}

double homogeneity(const MultiplicitySetup& setup) {
  return gamma_mu(setup) + 0.5 * static_cast<double>(setup.dim());
}

double mms_constant(const MultiplicitySetup& setup) {
  double log_c = 0.0;
  for (double kj : setup.k()) log_c += (kj + 0.5) * std::log(2.0) + std::lgamma(kj + 0.5);
  return std::exp(log_c);
}

double weight_density(const MultiplicitySetup& setup, std::span<const double> q) {
  if (q.size() != setup.dim())
    throw std::invalid_argument("weight_density: point has dimension " + std::to_string(q.size()) +
                                ", setup has " + std::to_string(setup.dim()));
  double w = 1.0 / (mms_constant(setup) * std::pow(setup.t(), homogeneity(setup)));
  for (std::size_t j = 0; j < q.size(); ++j) {
    // |0|^0 = 1 for k_j = 0.
    if (setup.k(j) > 0.0) w *= std::pow(std::abs(q[j]), 2.0 * setup.k(j));
  }
  return w;
}

namespace {

// int_R |x|^{2k} e^{-x^2/2t} dx = 2 int_0^inf x^{2k} e^{-x^2/2t} dx.
double half_line_gaussian_moment(double k, double t) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [k, t](double x) {
    // log form: x^{2k} alone overflows where exp_sinh samples far out
    if (k > 0.0) return x > 0.0 ? std::exp(2.0 * k * std::log(x) - x * x / (2.0 * t)) : 0.0;
    return std::exp(-x * x / (2.0 * t));
  };
  double err = 0.0;
  double value = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-15, &err);
  return 2.0 * value;
}

}  // namespace

double mms_constant_check(const MultiplicitySetup& setup) {
  double value = 1.0;
  for (double kj : setup.k()) value *= half_line_gaussian_moment(kj, setup.t());
  return value / std::pow(setup.t(), homogeneity(setup));
}

double gaussian_mass_check(const MultiplicitySetup& setup) {
  return mms_constant_check(setup) / mms_constant(setup);
}

}  // namespace dunklsb
