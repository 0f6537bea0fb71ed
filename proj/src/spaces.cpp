#include "dunklsb/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "dunklsb/kernel.hpp"

namespace dunklsb {

cplx SampledFunction::operator()(std::span<const double> q) const {
  double r2 = 0.0;
  for (double v : q) r2 += v * v;
  const double env = envelope == 0.0 ? 1.0 : std::exp(-envelope * r2);
  if (!factors.empty()) {
    if (factors.size() != q.size())
      throw std::invalid_argument("SampledFunction '" + label + "': dimension mismatch");
    cplx v = env;
    for (std::size_t j = 0; j < q.size(); ++j) v *= factors[j](q[j]);
    return v;
  }
  return env * core(q);
}

SampledFunction make_sampled(std::string label, std::function<cplx(std::span<const double>)> core,
                             double envelope) {
  SampledFunction f;
  f.core = std::move(core);
  f.envelope = envelope;
  f.label = std::move(label);
  return f;
}

SampledFunction make_separable(std::string label, std::vector<std::function<cplx(double)>> factors,
                               double envelope) {
  SampledFunction f;
  auto fs = factors;
  f.core = [fs](std::span<const double> q) {
    cplx v = 1.0;
    for (std::size_t j = 0; j < q.size(); ++j) v *= fs[j](q[j]);
    return v;
  };
  f.factors = std::move(factors);
  f.envelope = envelope;
  f.label = std::move(label);
  return f;
}

SampledFunction linear_combination(const std::vector<cplx>& c, const std::vector<SampledFunction>& fs) {
  if (c.size() != fs.size() || fs.empty())
    throw std::invalid_argument("linear_combination: size mismatch");
  double env = fs.front().envelope;
  for (const auto& f : fs) env = std::min(env, f.envelope);
  std::vector<double> extra;
  for (const auto& f : fs) extra.push_back(f.envelope - env);
  SampledFunction out;
  out.envelope = env;
  out.label = "combination";
  out.core = [c, fs, extra](std::span<const double> q) {
    double r2 = 0.0;
    for (double v : q) r2 += v * v;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (c[i] == cplx(0.0)) continue;
      cplx core_i;
      if (fs[i].separable()) {
        core_i = 1.0;
        for (std::size_t j = 0; j < q.size(); ++j) core_i *= fs[i].factors[j](q[j]);
      } else {
        core_i = fs[i].core(q);
      }
      acc += c[i] * std::exp(-extra[i] * r2) * core_i;
    }
    return acc;
  };
  return out;
}

SampledFunction combine(cplx a, const SampledFunction& f, cplx b, const SampledFunction& g) {
  return linear_combination({a, b}, {f, g});
}

namespace {

cplx core_at(const SampledFunction& f, std::span<const double> q) {
  if (f.separable()) {
    cplx v = 1.0;
    for (std::size_t j = 0; j < q.size(); ++j) v *= f.factors[j](q[j]);
    return v;
  }
  return f.core(q);
}

}  // namespace

cplx l2_inner(const OmegaIntegrator& integ, const SampledFunction& f, const SampledFunction& g) {
  const double b = f.envelope + g.envelope;
  if (!(b > 0.0))
    throw std::invalid_argument("l2_inner: product of '" + f.label + "' and '" + g.label +
                                "' has no decaying Gaussian envelope");
  const auto& setup = integ.setup();
  if (f.separable() && g.separable() && f.factors.size() == setup.dim() &&
      g.factors.size() == setup.dim()) {
    cplx total = 1.0;
    for (std::size_t j = 0; j < setup.dim(); ++j) {
      auto ax = integ.axis_rule(j, b);
      cplx acc = 0.0;
      for (std::size_t i = 0; i < ax.rule->size(); ++i) {
        const double x = ax.rule->nodes[i];
        acc += ax.rule->weights[i] * std::conj(f.factors[j](x)) * g.factors[j](x);
      }
      total *= ax.factor * acc;
    }
    return total;
  }
  return integ.integrate(b, [&](std::span<const double> q) {
    return std::conj(core_at(f, q)) * core_at(g, q);
  });
}

double l2_norm(const OmegaIntegrator& integ, const SampledFunction& f) {
  return std::sqrt(std::max(0.0, l2_inner(integ, f, f).real()));
}

std::vector<double> b_weights(const MultiplicitySetup& setup_s, const MultiIndexLayout& layout) {
  if (layout.dim() != setup_s.dim()) throw std::invalid_argument("b_weights: dimension mismatch");
  const double ls = std::log(setup_s.t());
  std::vector<std::vector<double>> lg(setup_s.dim(), std::vector<double>(layout.degree() + 1));
  for (std::size_t j = 0; j < setup_s.dim(); ++j)
    for (int n = 0; n <= layout.degree(); ++n) lg[j][n] = log_gamma_factor(setup_s.k(j), n);
  std::vector<double> w(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    auto n = layout.index(i);
    double l = layout.total_degree(i) * ls;
    for (std::size_t j = 0; j < n.size(); ++j) l += lg[j][n[j]];
    w[i] = std::exp(l);
  }
  // Exact products where representable, so low-degree weights carry no log/exp rounding.
  for (std::size_t i = 0; i < layout.size() && layout.total_degree(i) <= 20; ++i) {
    auto n = layout.index(i);
    double v = std::pow(setup_s.t(), layout.total_degree(i));
    for (std::size_t j = 0; j < n.size(); ++j) v *= gamma_factor(setup_s.k(j), n[j]);
    w[i] = v;
  }
  return w;
}

cplx b_inner(const MultiplicitySetup& setup_s, const CoeffSeries& f, const CoeffSeries& g) {
  if (f.dim() != setup_s.dim() || g.dim() != setup_s.dim())
    throw std::invalid_argument("b_inner: dimension mismatch");
  const CoeffSeries& small = f.degree() <= g.degree() ? f : g;
  auto w = b_weights(setup_s, small.layout());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < small.size(); ++i) acc += std::conj(f[i]) * g[i] * w[i];
  return acc;
}

double b_norm(const MultiplicitySetup& setup_s, const CoeffSeries& f) {
  return std::sqrt(std::max(0.0, b_inner(setup_s, f, f).real()));
}

CoeffSeries b_kernel(const MultiplicitySetup& setup_s, std::span<const cplx> z, int degree) {
  if (z.size() != setup_s.dim()) throw std::invalid_argument("b_kernel: dimension mismatch");
  CoeffSeries out(setup_s.dim(), degree);
  auto w = b_weights(setup_s, out.layout());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto n = out.layout().index(i);
    cplx m = 1.0;
    for (std::size_t j = 0; j < n.size(); ++j) m *= std::pow(std::conj(z[j]), n[j]);
    out[i] = m / w[i];
  }
  return out;
}

InnerWithTail c_inner_detailed(const MultiplicitySetup& setup, const CoeffSeries& f,
                               const CoeffSeries& g) {
  CoeffSeries gf = g_map(setup, f);
  CoeffSeries gg = g_map(setup, g);
  auto half = setup.at_time(setup.t() / 2.0);
  return {b_inner(half, gf, gg), gf.tail_flag + gg.tail_flag};
}

cplx c_inner(const MultiplicitySetup& setup, const CoeffSeries& f, const CoeffSeries& g) {
  return c_inner_detailed(setup, f, g).value;
}

double c_norm(const MultiplicitySetup& setup, const CoeffSeries& f) {
  return std::sqrt(std::max(0.0, c_inner(setup, f, f).real()));
}

CoeffSeries c_kernel(const MultiplicitySetup& setup, std::span<const cplx> z, int degree) {
  if (z.size() != setup.dim()) throw std::invalid_argument("c_kernel: dimension mismatch");
  const double t = setup.t();
  // E_mu(conj(z) w / 2t) = K_{mu,2t}(z, w).
  CoeffSeries raw = b_kernel(setup.at_time(2.0 * t), z, degree);
  CoeffSeries out = gaussian_multiply(raw, -1.0 / (4.0 * t));
  cplx zz = 0.0;
  for (auto c : z) zz += std::conj(c) * std::conj(c);
  out *= std::pow(2.0, -homogeneity(setup)) * std::exp(-zz / (4.0 * t));
  return out;
}

std::vector<double> hermite_poly_values(double k, double t, int J, double x) {
  std::vector<double> P(J + 1);
  P[0] = 1.0;
  if (J == 0) return P;
  auto beta = jacobi_offdiagonals(k, t, J);
  P[1] = x / std::sqrt(beta[0]);
  for (int n = 1; n < J; ++n)
    P[n + 1] = (x * P[n] - std::sqrt(beta[n - 1]) * P[n - 1]) / std::sqrt(beta[n]);
  return P;
}

std::vector<SampledFunction> hermite_basis(const MultiplicitySetup& setup, int max_deg) {
  if (max_deg < 0) throw std::invalid_argument("hermite_basis: max_deg must be >= 0");
  const double t = setup.t();
  auto layout = MultiIndexLayout::get(setup.dim(), max_deg);
  std::vector<SampledFunction> out;
  for (std::size_t i = 0; i < layout->size(); ++i) {
    auto n = layout->index(i);
    std::vector<std::function<cplx(double)>> fs;
    std::string label = "p_";
    for (std::size_t j = 0; j < n.size(); ++j) {
      const double kj = setup.k(j);
      const int nj = n[j];
      fs.push_back([kj, t, nj](double x) -> cplx { return hermite_poly_values(kj, t, nj, x)[nj]; });
      label += (j ? "," : "") + std::to_string(nj);
    }
    out.push_back(make_separable(label, std::move(fs), 1.0 / (4.0 * t)));
  }
  return out;
}

std::vector<CoeffSeries> weighted_gram_schmidt(std::vector<CoeffSeries> family,
                                               const std::vector<double>& weights) {
  auto inner = [&](const CoeffSeries& a, const CoeffSeries& b) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i] * weights[i];
    return acc;
  };
  std::vector<CoeffSeries> basis;
  for (std::size_t m = 0; m < family.size(); ++m) {
    CoeffSeries v = family[m];
    const double n0 = std::sqrt(std::max(0.0, inner(v, v).real()));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) v -= inner(e, v) * e;
    const double nv = std::sqrt(std::max(0.0, inner(v, v).real()));
    if (!(nv > 1e-12 * n0) || n0 == 0.0)
      throw std::runtime_error("gs_orthonormal_basis: numerical rank loss at element " +
                               std::to_string(m));
    v *= 1.0 / nv;
    v.tail_flag = 0.0;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<CoeffSeries> gs_orthonormal_basis(const SpaceTag& space, int max_deg, int degree) {
  const auto& setup = space.setup;
  if (max_deg > degree) throw std::invalid_argument("gs_orthonormal_basis: max_deg exceeds degree");
  auto layout = MultiIndexLayout::get(setup.dim(), max_deg);
  std::vector<CoeffSeries> family;
  for (std::size_t i = 0; i < layout->size(); ++i)
    family.push_back(CoeffSeries::monomial(setup.dim(), degree, layout->index(i)));

  switch (space.which) {
    case Space::B:
      return weighted_gram_schmidt(std::move(family),
                                   b_weights(setup, *MultiIndexLayout::get(setup.dim(), degree)));
    case Space::C: {
      // Orthonormalize the G-images of e^{-z^2/4t} z^n in B_{t/2}, then pull back.
      auto half = setup.at_time(setup.t() / 2.0);
      std::vector<CoeffSeries> images;
      for (const auto& mono : family) {
        CoeffSeries f = gaussian_multiply(mono, -1.0 / (4.0 * setup.t()));
        images.push_back(g_map(setup, f));
      }
      auto ortho = weighted_gram_schmidt(std::move(images),
                                         b_weights(half, *MultiIndexLayout::get(setup.dim(), degree)));
      std::vector<CoeffSeries> out;
      for (const auto& e : ortho) out.push_back(g_inverse(setup, e));
      return out;
    }
    case Space::L2:
      break;
  }
  throw std::invalid_argument("gs_orthonormal_basis: L2 bases come from hermite_basis");
}

SampledFunction dilation_l2(const MultiplicitySetup& setup, double lambda, const SampledFunction& psi) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation_l2: lambda must be > 0");
  const double c = std::pow(lambda, homogeneity(setup));
  SampledFunction out;
  out.envelope = psi.envelope * lambda * lambda;
  out.label = psi.label + " dilated";
  if (psi.separable()) {
    const double cj = std::pow(c, 1.0 / static_cast<double>(psi.factors.size()));
    for (const auto& f : psi.factors)
      out.factors.push_back([f, lambda, cj](double x) { return cj * f(lambda * x); });
  }
  out.core = [psi, lambda, c](std::span<const double> q) {
    std::vector<double> y(q.begin(), q.end());
    for (auto& v : y) v *= lambda;
    return c * core_at(psi, y);
  };
  return out;
}

}  // namespace dunklsb
