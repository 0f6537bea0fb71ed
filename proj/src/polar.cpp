#include "dunklsb/polar.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "dunklsb/kernel.hpp"
#include "dunklsb/series.hpp"
#include "dunklsb/spaces.hpp"
#include "dunklsb/transforms.hpp"

namespace dunklsb {

RankDeficientError::RankDeficientError(double smin, double smax)
    : std::runtime_error("polar_factor: matrix is numerically rank deficient (sigma_min = " +
                         std::to_string(smin) + ", sigma_max = " + std::to_string(smax) + ")"),
      sigma_min(smin),
      sigma_max(smax) {}

namespace {

template <class Scalar>
struct Hestenes {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat A;  // overwritten by U Sigma
  Mat V;
  int sweeps = 0;

  explicit Hestenes(Mat a) : A(std::move(a)), V(Mat::Identity(A.cols(), A.cols())) {
    const Eigen::Index n = A.cols();
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(A.rows()));
    for (sweeps = 1; sweeps <= 80; ++sweeps) {
      bool rotated = false;
      for (Eigen::Index p = 0; p + 1 < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const double alpha = A.col(p).squaredNorm();
          const double beta = A.col(q).squaredNorm();
          Scalar gamma = A.col(p).dot(A.col(q));
          const double ag = std::abs(gamma);
          if (ag == 0.0 || ag <= tol * std::sqrt(alpha * beta)) continue;
          rotated = true;
          double g = ag;
          if constexpr (std::is_same_v<Scalar, double>) {
            g = gamma;
          } else {
            const Scalar phase = std::conj(gamma / ag);
            A.col(q) *= phase;
            V.col(q) *= phase;
          }
          const double zeta = (beta - alpha) / (2.0 * g);
          const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = c * t;
          for (Mat* X : {&A, &V}) {
            for (Eigen::Index i = 0; i < X->rows(); ++i) {
              const Scalar xp = (*X)(i, p), xq = (*X)(i, q);
              (*X)(i, p) = c * xp - s * xq;
              (*X)(i, q) = s * xp + c * xq;
            }
          }
        }
      }
      if (!rotated) return;
    }
    throw SvdConvergenceError("svd: one-sided Jacobi did not converge in 80 sweeps");
  }
};

template <class Scalar>
SvdResult svd_tall(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& M) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = M.rows(), n = M.cols();
  Eigen::HouseholderQR<Mat> qr(M);
  Mat R = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  Mat Q = qr.householderQ() * Mat::Identity(m, n);
  Hestenes<Scalar> h(R);

  std::vector<double> norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms[j] = h.A.col(j).norm();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return norms[a] > norms[b]; });

  SvdResult r;
  r.sweeps = h.sweeps;
  r.sigma.resize(n);
  Mat Ur(n, n), Vr(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto j = order[k];
    r.sigma(k) = norms[j];
    Ur.col(k) = norms[j] > 0.0 ? Mat(h.A.col(j) / norms[j]) : Mat::Zero(n, 1);
    Vr.col(k) = h.V.col(j);
  }
  r.U = (Q * Ur).template cast<cplx>();
  r.V = Vr.template cast<cplx>();
  return r;
}

}  // namespace

SvdResult svd(const Eigen::MatrixXcd& M) {
  if (!M.allFinite()) throw std::invalid_argument("svd: matrix has non-finite entries");
  if (M.rows() < M.cols()) {
    SvdResult r = svd(M.adjoint());
    std::swap(r.U, r.V);
    return r;
  }
  if (M.imag().cwiseAbs().maxCoeff() == 0.0) return svd_tall<double>(M.real());
  return svd_tall<cplx>(M);
}

Eigen::MatrixXcd polar_factor(const Eigen::MatrixXcd& M) {
  SvdResult r = svd(M);
  const double smax = r.sigma.size() ? r.sigma(0) : 0.0;
  const double smin = r.sigma.size() ? r.sigma(r.sigma.size() - 1) : 0.0;
  if (!(smax > 0.0) || smin <= 1e-12 * smax) throw RankDeficientError(smin, smax);
  return r.U * r.V.adjoint();
}

// ---------------------------------------------------------------------------

HarnessMatrices harness_matrices(const MultiplicitySetup& setup, int domain_deg, int degree,
                                 int heat_deg, int nodes) {
  OmegaIntegrator integ(setup, nodes);
  const auto half = setup.at_time(setup.t() / 2.0);
  auto domain = hermite_basis(setup, domain_deg);
  auto codomain = gs_orthonormal_basis({Space::C, setup}, degree, degree);

  // Pairings in C go through G into B_{t/2}: <e_i, X>_C = sum conj(Ge_i) GX w.
  const auto& L = *MultiIndexLayout::get(setup.dim(), degree);
  const auto w = b_weights(half, L);
  const Eigen::Index len = static_cast<Eigen::Index>(L.size());
  Eigen::MatrixXcd E(len, static_cast<Eigen::Index>(codomain.size()));
  for (std::size_t i = 0; i < codomain.size(); ++i) {
    CoeffSeries ge = g_map(setup, codomain[i]);
    for (Eigen::Index a = 0; a < len; ++a) E(a, i) = ge[a] * w[a];
  }

  HarnessMatrices out;
  {
    Eigen::MatrixXcd G(len, static_cast<Eigen::Index>(codomain.size()));
    for (std::size_t i = 0; i < codomain.size(); ++i) {
      CoeffSeries ge = g_map(setup, codomain[i]);
      for (Eigen::Index a = 0; a < len; ++a) G(a, i) = ge[a];
    }
    Eigen::MatrixXcd gram = E.adjoint() * G;
    out.codomain_gram_dev =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  }

  const Eigen::Index nd = static_cast<Eigen::Index>(domain.size());
  Eigen::MatrixXcd XR(len, nd), XC(len, nd);
  for (Eigen::Index j = 0; j < nd; ++j) {
    CoeffSeries r = g_map(setup, restrict_adjoint(integ, domain[j], degree));
    CoeffSeries c = g_map(setup, transform_C(integ, domain[j], degree));
    for (Eigen::Index a = 0; a < len; ++a) {
      XR(a, j) = r[a];
      XC(a, j) = c[a];
    }
  }
  // E already carries the weights; the conjugate comes from adjoint().
  out.rstar = E.adjoint() * XR;
  out.c = E.adjoint() * XC;

  const auto nh = static_cast<Eigen::Index>(MultiIndexLayout::get(setup.dim(), heat_deg)->size());
  out.heat.resize(nh, nh);
  for (Eigen::Index j = 0; j < nh; ++j) {
    SampledFunction h = heat_apply(integ, 2.0 * setup.t(), domain[j]);
    for (Eigen::Index i = 0; i < nh; ++i) out.heat(i, j) = l2_inner(integ, domain[i], h);
  }
  return out;
}

RestrictionReport verify_restriction_principle(const MultiplicitySetup& setup,
                                               const RestrictionOptions& opts) {
  const int dom_deg = opts.domain_deg < 0 ? opts.degree - 8 : opts.domain_deg;
  if (dom_deg < opts.max_deg || dom_deg > opts.degree)
    throw std::invalid_argument("verify_restriction_principle: need max_deg <= domain_deg <= degree");
  HarnessMatrices H = harness_matrices(setup, dom_deg, opts.degree, opts.max_deg, opts.nodes);

  RestrictionReport rep;
  rep.domain_size = H.rstar.cols();
  rep.codomain_size = H.rstar.rows();
  const auto nb = static_cast<Eigen::Index>(MultiIndexLayout::get(setup.dim(), opts.max_deg)->size());
  rep.compared_columns = nb;

  const auto& Lc = *MultiIndexLayout::get(setup.dim(), opts.degree);
  for (Eigen::Index i = 0; i < H.rstar.rows(); ++i) {
    for (Eigen::Index j = 0; j < H.rstar.cols(); ++j) {
      auto a = Lc.index(i), b = Lc.index(j);
      bool same = true;
      for (std::size_t d = 0; d < a.size(); ++d) same = same && ((a[d] - b[d]) % 2 == 0);
      if (!same) rep.cross_parity_max = std::max(rep.cross_parity_max, std::abs(H.rstar(i, j)));
    }
  }

  SvdResult s = svd(H.rstar);
  rep.sigma_max = s.sigma(0);
  rep.sigma_min = s.sigma(s.sigma.size() - 1);
  if (!(rep.sigma_min > 1e-12 * rep.sigma_max)) {
    rep.rank_deficient = true;
    rep.u_minus_c = std::numeric_limits<double>::infinity();
  } else {
    Eigen::MatrixXcd W = s.U * s.V.adjoint();
    rep.u_minus_c = (W.leftCols(nb) - H.c.leftCols(nb)).cwiseAbs().maxCoeff();
  }

  Eigen::MatrixXcd rr = H.rstar.adjoint() * H.rstar;
  rep.rrstar_minus_heat = (rr.topLeftCorner(nb, nb) - H.heat).cwiseAbs().maxCoeff();
  Eigen::MatrixXcd cc = H.c.leftCols(nb).adjoint() * H.c.leftCols(nb);
  rep.c_isometry_dev = (cc - Eigen::MatrixXcd::Identity(nb, nb)).cwiseAbs().maxCoeff();

  if (opts.max_deg + 8 <= opts.degree) {
    const auto rows = static_cast<Eigen::Index>(MultiIndexLayout::get(setup.dim(), opts.max_deg + 8)->size());
    try {
      Eigen::MatrixXcd W = polar_factor(H.rstar.topLeftCorner(rows, nb));
      rep.literal_u_minus_c = (W - H.c.topLeftCorner(rows, nb)).cwiseAbs().maxCoeff();
    } catch (const RankDeficientError&) {
      rep.literal_u_minus_c = -1.0;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

ProbeResult probe_axis(double k, double t, double width, int nodes) {
  const double a = 1.0 / (2.0 * width * width);
  const double s = 2.0 * t;
  ProbeResult res;

  OmegaIntegrator outer(MultiplicitySetup::rank_one(k, t), nodes);
  auto orule = outer.axis_rule(0, a);
  if (orule.rule->nodes.back() < 4.0 * width) {
    std::cerr << "operator_norm_probe: quadrature span " << orule.rule->nodes.back()
              << " is below 4*width = " << 4.0 * width << "\n";
    res.warned = true;
  }

  // Outer nodes with a x^2 > 40 contribute below 1e-17 relative; the inner
  // rule is grown until it covers the remaining ones.
  const double xmax = std::sqrt(40.0 / a);
  const double need = xmax + std::sqrt(80.0 * s);
  OmegaIntegrator inner(MultiplicitySetup::rank_one(k, s), nodes);
  auto irule = inner.axis_rule(0, 1.0 / (2.0 * s) + a);
  int n_in = nodes;
  while (irule.rule->nodes.back() < need) {
    n_in = static_cast<int>(std::ceil(n_in * 1.5));
    irule = inner.with_nodes(n_in).axis_rule(0, 1.0 / (2.0 * s) + a);
  }
  res.inner_nodes = n_in;
  res.node_span = irule.rule->nodes.back();
  // The inner weights underflow where the integrand still matters, so they
  // are used in log form.
  const auto logw = log_christoffel_weights(*irule.rule);

  KernelEvalOptions opts;
  opts.max_terms = 200000;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < orule.rule->size(); ++i) {
    const double x = orule.rule->nodes[i];
    if (a * x * x > 40.0) continue;
    const double wx = orule.rule->weights[i];
    double h = 0.0;
    for (std::size_t j = 0; j < irule.rule->size(); ++j) {
      const double q = irule.rule->nodes[j];
      const double gap = std::abs(x) - std::abs(q);
      if (gap * gap / (2.0 * s) > 40.0) continue;
      ScaledValue e = rank_one_kernel_scaled(k, x * q / s, opts);
      h += e.value_shifted(logw[j] - x * x / (2.0 * s)).real();
    }
    h *= irule.factor;
    num += wx * h;
    den += wx * std::exp(-a * x * x);
  }
  res.quotient = num / den;
  return res;
}

}  // namespace

ProbeResult operator_norm_probe(const MultiplicitySetup& setup, double width, int nodes) {
  if (!(width > 0.0)) throw std::invalid_argument("operator_norm_probe: width must be > 0");
  ProbeResult total;
  total.quotient = 1.0;
  total.node_span = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < setup.dim(); ++j) {
    ProbeResult r = probe_axis(setup.k(j), setup.t(), width, nodes);
    total.quotient *= r.quotient;
    total.node_span = std::min(total.node_span, r.node_span);
    total.inner_nodes = std::max(total.inner_nodes, r.inner_nodes);
    total.warned = total.warned || r.warned;
  }
  return total;
}

}  // namespace dunklsb
