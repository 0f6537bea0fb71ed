#include "dunklsb/kernel.hpp"

#include <cmath>
#include <limits>

namespace dunklsb {

void KernelEvalOptions::validate() const {
  if (max_terms < 8) throw std::invalid_argument("KernelEvalOptions: max_terms must be >= 8");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("KernelEvalOptions: tail_tol must be > 0");
}

KernelConvergenceError::KernelConvergenceError(double tail_estimate, int terms)
    : std::runtime_error("Dunkl kernel series did not converge after " + std::to_string(terms) +
                         " terms (tail estimate " + std::to_string(tail_estimate) + ")"),
      tail_(tail_estimate),
      terms_(terms) {}

double log_gamma_factor(double k, int n) {
  if (n < 0) throw std::invalid_argument("gamma_factor: n must be >= 0");
  const int m = n / 2;
  const double a = k + 0.5;
  double lg = n * std::log(2.0) + std::lgamma(m + 1.0);
  lg += (n % 2 == 0) ? std::lgamma(a + m) - std::lgamma(a) : std::lgamma(a + m + 1) - std::lgamma(a);
  return lg;
}

double gamma_factor(double k, int n) {
  if (n < 0) throw std::invalid_argument("gamma_factor: n must be >= 0");
  if (k < 0.0) throw std::invalid_argument("gamma_factor: k must be >= 0");
  double g = 1.0;
  for (int j = 1; j <= n; ++j) g *= j + ((j & 1) ? 2.0 * k : 0.0);
  if (!std::isfinite(g))
    throw std::overflow_error("gamma_factor: gamma_" + std::to_string(n) + " overflows (log = " +
                              std::to_string(log_gamma_factor(k, n)) + ")");
  return g;
}

cplx ScaledValue::value() const { return value_shifted(0.0); }

cplx ScaledValue::value_shifted(cplx shift) const {
  if (mantissa == cplx(0.0)) return 0.0;
  return mantissa * std::exp(shift + log_scale);
}

namespace {

constexpr double kRescale = 1e150;

template <class T>
ScaledValue series(double k, T u, const KernelEvalOptions& opts) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double log_big = std::log(kRescale);
  const double au = std::abs(u);
  T term = 1.0, sum = 1.0, comp = 0.0;
  double maxabs = 1.0, scale = 0.0, tail = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= opts.max_terms; ++n) {
    term *= u / (n + ((n & 1) ? 2.0 * k : 0.0));
    T y = term - comp;
    T s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    double at = std::abs(term);
    if (at > maxabs) maxabs = at;
    if (at > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      comp /= kRescale;
      maxabs /= kRescale;
      at /= kRescale;
      scale += log_big;
    }
    const double q = au / (n + 1);
    if (q < 1.0) {
      tail = at * q / (1.0 - q);
      const double thr = opts.tail_tol * std::max(std::abs(sum), eps * maxabs);
      if (at <= thr && tail <= thr) return ScaledValue{cplx(sum), scale};
    }
  }
  throw KernelConvergenceError(tail * std::exp(scale), opts.max_terms);
}

void renormalize(ScaledValue& v) {
  const double a = std::abs(v.mantissa);
  if (a == 0.0 || (a > 1e-100 && a < 1e100)) return;
  const double l = std::log(a);
  v.mantissa /= a;
  v.log_scale += l;
}

void check_dims(const MultiplicitySetup& setup, std::size_t a, std::size_t b) {
  if (a != setup.dim() || b != setup.dim())
    throw std::invalid_argument("Dunkl kernel: argument dimension does not match setup (N = " +
                                std::to_string(setup.dim()) + ")");
}

}  // namespace

ScaledValue rank_one_kernel_scaled(double k, cplx u, const KernelEvalOptions& opts) {
  opts.validate();
  if (u.imag() == 0.0) return series<double>(k, u.real(), opts);
  return series<cplx>(k, u, opts);
}

double rank_one_kernel_real(double k, double u, const KernelEvalOptions& opts) {
  opts.validate();
  return series<double>(k, u, opts).value().real();
}

ScaledValue dunkl_kernel_scaled(const MultiplicitySetup& setup, std::span<const cplx> z,
                                std::span<const cplx> w, const KernelEvalOptions& opts) {
  check_dims(setup, z.size(), w.size());
  ScaledValue acc;
  for (std::size_t j = 0; j < z.size(); ++j) {
    ScaledValue f = rank_one_kernel_scaled(setup.k(j), z[j] * w[j], opts);
    acc.mantissa *= f.mantissa;
    acc.log_scale += f.log_scale;
    renormalize(acc);
  }
  return acc;
}

cplx dunkl_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, std::span<const cplx> w,
                  const KernelEvalOptions& opts) {
  return dunkl_kernel_scaled(setup, z, w, opts).value();
}

cplx heat_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, std::span<const cplx> w,
                 double s, const KernelEvalOptions& opts) {
  if (!(s > 0.0)) throw std::invalid_argument("heat_kernel: s must be > 0");
  check_dims(setup, z.size(), w.size());
  ScaledValue acc;
  cplx shift = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    ScaledValue f = rank_one_kernel_scaled(setup.k(j), z[j] * w[j] / s, opts);
    acc.mantissa *= f.mantissa;
    acc.log_scale += f.log_scale;
    renormalize(acc);
    shift -= (z[j] * z[j] + w[j] * w[j]) / (2.0 * s);
  }
  return acc.value_shifted(shift);
}

double heat_kernel_real(const MultiplicitySetup& setup, std::span<const double> x,
                        std::span<const double> q, double s, const KernelEvalOptions& opts) {
  if (!(s > 0.0)) throw std::invalid_argument("heat_kernel: s must be > 0");
  check_dims(setup, x.size(), q.size());
  opts.validate();
  double m = 1.0, e = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    ScaledValue f = series<double>(setup.k(j), x[j] * q[j] / s, opts);
    m *= f.mantissa.real();
    e += f.log_scale - (x[j] * x[j] + q[j] * q[j]) / (2.0 * s);
  }
  return m == 0.0 ? 0.0 : m * std::exp(e);
}

double kernel_bound_margin(const MultiplicitySetup& setup, std::span<const cplx> z,
                           std::span<const cplx> w, const KernelEvalOptions& opts) {
  double nz = 0.0, nw = 0.0;
  for (auto c : z) nz += std::norm(c);
  for (auto c : w) nw += std::norm(c);
  return std::exp(std::sqrt(nz) * std::sqrt(nw)) - std::abs(dunkl_kernel(setup, z, w, opts));
}

double kernel_magnitude(const MultiplicitySetup& setup, std::span<const cplx> z,
                        std::span<const cplx> w, const KernelEvalOptions& opts) {
  check_dims(setup, z.size(), w.size());
  double m = 1.0;
  for (std::size_t j = 0; j < z.size(); ++j)
    m *= rank_one_kernel_real(setup.k(j), std::abs(z[j]) * std::abs(w[j]), opts);
  return m;
}

}  // namespace dunklsb
