#include "dunklsb/transforms.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace dunklsb {

KernelEvalOptions quadrature_kernel_options() {
  KernelEvalOptions o;
  o.max_terms = 20000;
  return o;
}

namespace {

cplx holo_square(std::span<const cplx> z) {
  cplx s = 0.0;
  for (auto c : z) s += c * c;
  return s;
}

double square(std::span<const double> q) {
  double s = 0.0;
  for (auto v : q) s += v * v;
  return s;
}

cplx core_of(const SampledFunction& f, std::span<const double> q) {
  if (f.separable()) {
    cplx v = 1.0;
    for (std::size_t j = 0; j < q.size(); ++j) v *= f.factors[j](q[j]);
    return v;
  }
  return f.core(q);
}

bool separable_in(const SampledFunction& f, std::size_t dim) {
  return f.separable() && f.factors.size() == dim;
}

}  // namespace

cplx a_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, std::span<const double> q) {
  const double t = setup.t();
  std::vector<cplx> zs(z.begin(), z.end()), qs(q.begin(), q.end());
  for (auto& c : zs) c /= std::sqrt(t);
  for (auto& c : qs) c /= std::sqrt(t);
  ScaledValue e = dunkl_kernel_scaled(setup, zs, qs, quadrature_kernel_options());
  return e.value_shifted(-holo_square(z) / (2.0 * t) - square(q) / (4.0 * t));
}

CoeffSeries moment_series(const OmegaIntegrator& integ, const SampledFunction& psi, double extra,
                          int degree) {
  const auto& setup = integ.setup();
  const std::size_t N = setup.dim();
  const double b = extra + psi.envelope;
  CoeffSeries out(N, degree);
  const auto& L = out.layout();

  if (separable_in(psi, N)) {
    std::vector<std::vector<cplx>> m(N, std::vector<cplx>(degree + 1, 0.0));
    for (std::size_t j = 0; j < N; ++j) {
      auto ax = integ.axis_rule(j, b);
      for (std::size_t i = 0; i < ax.rule->size(); ++i) {
        const double x = ax.rule->nodes[i];
        cplx v = ax.factor * ax.rule->weights[i] * psi.factors[j](x);
        for (int n = 0; n <= degree; ++n) {
          m[j][n] += v;
          v *= x;
        }
      }
    }
    for (std::size_t i = 0; i < L.size(); ++i) {
      auto n = L.index(i);
      cplx v = 1.0;
      for (std::size_t j = 0; j < N; ++j) v *= m[j][n[j]];
      out[i] = v;
    }
    return out;
  }

  QuadratureRule rule = integ.weighted_rule(b);
  std::vector<double> pw(N * (degree + 1));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    auto q = rule.node(i);
    const cplx v = rule.weights[i] * core_of(psi, q);
    for (std::size_t j = 0; j < N; ++j) {
      pw[j * (degree + 1)] = 1.0;
      for (int n = 1; n <= degree; ++n) pw[j * (degree + 1) + n] = pw[j * (degree + 1) + n - 1] * q[j];
    }
    for (std::size_t a = 0; a < L.size(); ++a) {
      auto n = L.index(a);
      double mono = 1.0;
      for (std::size_t j = 0; j < N; ++j) mono *= pw[j * (degree + 1) + n[j]];
      out[a] += v * mono;
    }
  }
  return out;
}

namespace {

CoeffSeries divide_by_weights(CoeffSeries s, const MultiplicitySetup& setup_s) {
  auto w = b_weights(setup_s, s.layout());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] /= w[i];
  return s;
}

}  // namespace

CoeffSeries transform_A(const OmegaIntegrator& integ, const SampledFunction& psi, int degree) {
  const auto& setup = integ.setup();
  const double t = setup.t();
  CoeffSeries raw = divide_by_weights(moment_series(integ, psi, 1.0 / (4.0 * t), degree), setup);
  return gaussian_multiply(raw, -1.0 / (2.0 * t));
}

CoeffSeries transform_C(const OmegaIntegrator& integ, const SampledFunction& psi, int degree) {
  const auto& setup = integ.setup();
  const double t = setup.t();
  CoeffSeries raw = divide_by_weights(moment_series(integ, psi, 1.0 / (2.0 * t), degree), setup);
  return gaussian_multiply(raw, -1.0 / (2.0 * t));
}

CoeffSeries restrict_adjoint(const OmegaIntegrator& integ_t, const SampledFunction& psi, int degree) {
  const auto& setup = integ_t.setup();
  const double t = setup.t();
  CoeffSeries raw = divide_by_weights(moment_series(integ_t, psi, 1.0 / (4.0 * t), degree),
                                      setup.at_time(2.0 * t));
  raw *= std::pow(2.0, -homogeneity(setup));
  return gaussian_multiply(raw, -1.0 / (4.0 * t));
}

cplx transform_A_at(const OmegaIntegrator& integ, const SampledFunction& psi, std::span<const cplx> z) {
  const auto& setup = integ.setup();
  const double t = setup.t();
  std::vector<cplx> zs(z.begin(), z.end());
  for (auto& c : zs) c /= std::sqrt(t);
  const cplx pre = -holo_square(z) / (2.0 * t);
  const auto opts = quadrature_kernel_options();
  return integ.integrate(1.0 / (4.0 * t) + psi.envelope, [&](std::span<const double> q) {
    std::vector<cplx> qs(q.begin(), q.end());
    for (auto& c : qs) c /= std::sqrt(t);
    return dunkl_kernel_scaled(setup, zs, qs, opts).value_shifted(pre) * core_of(psi, q);
  });
}

cplx transform_C_at(const OmegaIntegrator& integ, const SampledFunction& psi, std::span<const cplx> z) {
  const auto& setup = integ.setup();
  const double t = setup.t();
  const auto opts = quadrature_kernel_options();
  // rho_t(z, q) = e^{-z^2/2t} e^{-q^2/2t} E(zq/t); the q-Gaussian goes into the rule.
  return integ.integrate(1.0 / (2.0 * t) + psi.envelope, [&](std::span<const double> q) {
    std::vector<cplx> qs(q.begin(), q.end());
    std::vector<cplx> zs(z.begin(), z.end());
    for (auto& c : zs) c /= t;
    return dunkl_kernel_scaled(setup, zs, qs, opts).value_shifted(-holo_square(z) / (2.0 * t)) *
           core_of(psi, q);
  });
}

namespace {

// One coordinate of the heat flow: x -> int domega_{k,s} rho_{k,s}(x,q) e^{-a q^2} f(q).
std::function<cplx(double)> heat_axis(double k, double s, int nodes, double a,
                                      std::function<cplx(double)> f) {
  OmegaIntegrator integ(MultiplicitySetup::rank_one(k, s), nodes);
  auto ax = integ.axis_rule(0, 1.0 / (2.0 * s) + a);
  auto opts = quadrature_kernel_options();
  return [ax, f = std::move(f), k, s, opts](double x) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < ax.rule->size(); ++i) {
      const double q = ax.rule->nodes[i];
      ScaledValue e = rank_one_kernel_scaled(k, x * q / s, opts);
      acc += ax.rule->weights[i] * e.value_shifted(-x * x / (2.0 * s)) * f(q);
    }
    return ax.factor * acc;
  };
}

}  // namespace

SampledFunction heat_apply(const OmegaIntegrator& integ, double s, const SampledFunction& psi) {
  if (!(s > 0.0)) throw std::invalid_argument("heat_apply: s must be > 0");
  const auto& setup = integ.setup();
  const std::size_t N = setup.dim();
  const int nodes = integ.nodes_per_dim();
  if (separable_in(psi, N)) {
    std::vector<std::function<cplx(double)>> fs;
    for (std::size_t j = 0; j < N; ++j)
      fs.push_back(heat_axis(setup.k(j), s, nodes, psi.envelope, psi.factors[j]));
    return make_separable("heat(" + psi.label + ")", std::move(fs), 0.0);
  }
  auto rule = std::make_shared<QuadratureRule>(integ.at_time(s).weighted_rule(1.0 / (2.0 * s) + psi.envelope));
  auto opts = quadrature_kernel_options();
  MultiplicitySetup st = setup.at_time(s);
  return make_sampled(
      "heat(" + psi.label + ")",
      [rule, psi, st, s, opts](std::span<const double> x) {
        std::vector<cplx> xs(x.begin(), x.end());
        for (auto& c : xs) c /= s;
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rule->size(); ++i) {
          auto q = rule->node(i);
          std::vector<cplx> qs(q.begin(), q.end());
          ScaledValue e = dunkl_kernel_scaled(st, xs, qs, opts);
          acc += rule->weights[i] * e.value_shifted(-square(x) / (2.0 * s)) * core_of(psi, q);
        }
        return acc;
      },
      0.0);
}

SampledFunction dunkl_transform(const OmegaIntegrator& integ, double s, const SampledFunction& phi) {
  if (!(s > 0.0)) throw std::invalid_argument("dunkl_transform: s must be > 0");
  if (!(phi.envelope > 0.0))
    throw std::invalid_argument("dunkl_transform: input needs a decaying Gaussian envelope");
  const auto& setup = integ.setup();
  auto rule = std::make_shared<QuadratureRule>(integ.at_time(s).weighted_rule(phi.envelope));
  auto opts = quadrature_kernel_options();
  MultiplicitySetup st = setup.at_time(s);
  return make_sampled(
      "dunkl_transform(" + phi.label + ")",
      [rule, phi, st, s, opts](std::span<const double> x) {
        std::vector<cplx> xs(x.begin(), x.end());
        for (auto& c : xs) c *= cplx(0.0, -1.0 / s);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rule->size(); ++i) {
          auto q = rule->node(i);
          std::vector<cplx> qs(q.begin(), q.end());
          acc += rule->weights[i] * dunkl_kernel_scaled(st, xs, qs, opts).value() * core_of(phi, q);
        }
        return acc;
      },
      0.0);
}

SampledFunction restrict(const CoeffSeries& s) {
  return make_sampled("restrict", [s](std::span<const double> x) { return evaluate_real(s, x); }, 0.0);
}

SampledFunction f1_op(const MultiplicitySetup& setup, const SampledFunction& psi) {
  SampledFunction out = dilation_l2(setup, 1.0 / std::sqrt(2.0), psi);
  out.label = "F1(" + psi.label + ")";
  return out;
}

SampledFunction f1_adjoint(const MultiplicitySetup& setup, const SampledFunction& psi) {
  SampledFunction out = dilation_l2(setup, std::sqrt(2.0), psi);
  out.label = "F1*(" + psi.label + ")";
  return out;
}

CoeffSeries f2_op(const MultiplicitySetup& setup, const CoeffSeries& f) {
  CoeffSeries out = gaussian_multiply(dilate_series(f, std::sqrt(2.0)), 1.0 / (2.0 * setup.t()));
  out *= std::pow(2.0, homogeneity(setup) / 2.0);
  return out;
}

CoeffSeries f2_adjoint(const MultiplicitySetup& setup, const CoeffSeries& g) {
  CoeffSeries out = gaussian_multiply(dilate_series(g, 1.0 / std::sqrt(2.0)), -1.0 / (4.0 * setup.t()));
  out *= std::pow(2.0, -homogeneity(setup) / 2.0);
  return out;
}

SampledFunction not_restriction_op(const MultiplicitySetup& setup, const CoeffSeries& f) {
  const double c = std::pow(2.0, -homogeneity(setup));
  return make_sampled(
      "F1 R F2*",
      [f, c](std::span<const double> x) {
        std::vector<double> h(x.begin(), x.end());
        for (auto& v : h) v *= 0.5;
        return c * evaluate_real(f, h);
      },
      1.0 / (8.0 * setup.t()));
}

SampledFunction sbso_adjoint(const MultiplicitySetup& setup, const CoeffSeries& f) {
  if (setup.t() != 1.0) throw std::invalid_argument("sbso_adjoint: only t = 1 is supported");
  const double c = 1.0 / std::sqrt(mms_constant(setup));
  return make_sampled(
      "S*", [f, c](std::span<const double> x) { return c * evaluate_real(f, x); }, 0.5);
}

DiagramReport diagram_check(const OmegaIntegrator& integ, const SampledFunction& psi, int degree,
                            const std::vector<std::vector<cplx>>& points) {
  const auto& setup = integ.setup();
  CoeffSeries a = transform_A(integ, psi, degree);
  CoeffSeries rhs = f2_op(setup, transform_C(integ, f1_adjoint(setup, psi), degree));
  DiagramReport r;
  r.max_coeff_err = max_coeff_diff(a, rhs);
  r.scale = max_coeff_abs(a);
  for (const auto& z : points)
    r.max_point_err = std::max(r.max_point_err, std::abs(evaluate(a, z) - evaluate(rhs, z)));
  return r;
}

double ca_relation_check(const MultiplicitySetup& setup, const std::vector<std::vector<cplx>>& zs,
                         const std::vector<std::vector<double>>& qs) {
  const double t = setup.t();
  double worst = 0.0;
  for (const auto& z : zs) {
    std::vector<cplx> z2(z);
    for (auto& c : z2) c *= std::sqrt(2.0);
    for (const auto& q : qs) {
      std::vector<cplx> qc(q.begin(), q.end());
      std::vector<double> q2(q);
      for (auto& v : q2) v *= std::sqrt(2.0);
      cplx lhs = heat_kernel(setup, z2, qc, t, quadrature_kernel_options());
      cplx rhs = std::exp(-holo_square(z) / (2.0 * t)) * a_kernel(setup, z, q2);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  return worst;
}

KernelIdentityReport kernel_identities_check(const OmegaIntegrator& integ,
                                             const std::vector<std::vector<cplx>>& zs,
                                             const std::vector<std::vector<cplx>>& ws,
                                             const std::vector<std::vector<double>>& qs) {
  const auto& setup = integ.setup();
  const double t = setup.t();
  const auto opts = quadrature_kernel_options();
  KernelIdentityReport r;
  const std::vector<cplx> zero(setup.dim(), 0.0);
  for (const auto& z : zs) {
    for (const auto& q : qs) {
      std::vector<cplx> qc(q.begin(), q.end());
      cplx a = a_kernel(setup, z, q);
      cplx rho = heat_kernel(setup, z, qc, t, opts);
      cplx rho0 = heat_kernel(setup, zero, qc, t, opts);
      r.a_over_rho_err = std::max(r.a_over_rho_err, std::abs(a - rho / std::sqrt(rho0)) / std::abs(a));
    }
  }
  for (const auto& z : zs) {
    for (const auto& w : ws) {
      std::vector<cplx> zc(z), wc(w);
      for (auto& c : zc) c = std::conj(c) / std::sqrt(t);
      for (auto& c : wc) c /= std::sqrt(t);
      const cplx lhs = dunkl_kernel(setup, zc, wc, opts);
      const double scale = kernel_magnitude(setup, zc, wc, opts);
      // rho(w,q) conj(rho(z,q)) / rho(q,0); the factor e^{-q^2/2t} is the rule's envelope.
      cplx rhs = integ.integrate(1.0 / (2.0 * t), [&](std::span<const double> q) {
        std::vector<cplx> qc(q.begin(), q.end());
        const double q2 = square(q);
        cplx v = heat_kernel(setup, w, qc, t, opts) * std::conj(heat_kernel(setup, z, qc, t, opts));
        v /= heat_kernel(setup, qc, std::vector<cplx>(setup.dim(), 0.0), t, opts);
        return v * std::exp(q2 / (2.0 * t));
      });
      r.k_integral_err = std::max(r.k_integral_err, std::abs(lhs - rhs) / scale);
    }
  }
  return r;
}

}  // namespace dunklsb
