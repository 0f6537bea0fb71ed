// Check implementations for the verification suites.  Every check compares a
// library result with something computed along a different route: a closed
// form, an independent quadrature, or an algebraic identity.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dunklsb/kernel.hpp"
#include "dunklsb/polar.hpp"
#include "dunklsb/quadrature.hpp"
#include "dunklsb/report.hpp"
#include "dunklsb/series.hpp"
#include "dunklsb/spaces.hpp"
#include "dunklsb/transforms.hpp"

namespace dunklsb {

namespace {

using CVec = std::vector<cplx>;

std::string fmt(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

// FNV-1a, so seeds do not depend on the standard library's hash.
std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Ctx {
  const RunConfig& cfg;
  const GridPoint& point;
  VerificationReport& out;
  MultiplicitySetup setup;
  std::size_t N;

  Ctx(const RunConfig& c, const GridPoint& p, VerificationReport& o)
      : cfg(c), point(p), out(o), setup(p.k, p.t), N(p.k.size()) {}

  using Body = std::function<void(CheckRecord&, std::mt19937_64&)>;

  void check(const std::string& id, std::map<std::string, std::string> extra, double tol, std::string mode,
             const Body& body) {
    CheckRecord r;
    r.check_id = id;
    r.params = std::move(extra);
    r.params["N"] = std::to_string(N);
    r.params["k"] = fmt_list(point.k);
    r.params["t"] = fmt(point.t);
    r.tol = tol * cfg.tol_scale;
    r.mode = std::move(mode);
    std::string key = id;
    for (const auto& [k, v] : r.params) key += "|" + k + "=" + v;
    std::mt19937_64 rng(cfg.seed ^ fnv(key));
    auto t0 = std::chrono::steady_clock::now();
    try {
      body(r, rng);
    } catch (const std::exception& e) {
      r.abs_err = r.rel_err = std::numeric_limits<double>::quiet_NaN();
      r.note = std::string("error: ") + e.what();
    }
    r.runtime_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.decide();
    out.records.push_back(std::move(r));
  }
};

// Uniform in the complex ball of radius r in C^N.
CVec rand_ball(std::mt19937_64& rng, std::size_t N, double r) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CVec z(N);
  double nrm = 0.0;
  for (auto& c : z) {
    c = {g(rng), g(rng)};
    nrm += std::norm(c);
  }
  const double rad = r * std::pow(u(rng), 1.0 / (2.0 * static_cast<double>(N))) / std::sqrt(nrm);
  for (auto& c : z) c *= rad;
  return z;
}

std::vector<double> rand_real_ball(std::mt19937_64& rng, std::size_t N, double r) {
  CVec z = rand_ball(rng, N, r);
  std::vector<double> x(N);
  for (std::size_t j = 0; j < N; ++j) x[j] = z[j].real() + z[j].imag();
  double nrm = 0.0;
  for (double v : x) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm > r) for (auto& v : x) v *= r / nrm;
  return x;
}

double vnorm(const CVec& z) {
  double s = 0.0;
  for (auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

CVec conj_vec(CVec z) {
  for (auto& c : z) c = std::conj(c);
  return z;
}

CVec scale_vec(CVec z, cplx a) {
  for (auto& c : z) c *= a;
  return z;
}

cplx sq_sum(const CVec& z) {
  cplx s = 0.0;
  for (auto& c : z) s += c * c;
  return s;
}

void set_err(CheckRecord& r, double abs_err, double scale) {
  r.abs_err = abs_err;
  r.rel_err = abs_err / std::max(scale, std::numeric_limits<double>::min());
}

MultiplicitySetup zero_like(const MultiplicitySetup& s) {
  return MultiplicitySetup(std::vector<double>(s.dim(), 0.0), s.t());
}

// E_k(u) = Gamma(k+1/2)/(Gamma(k)Gamma(1/2)) int_{-1}^{1} (1-s)^{k-1}(1+s)^k e^{su} ds, k > 0.
double rank_one_integral(double k, double u) {
  if (k == 0.0) return std::exp(u);
  boost::math::quadrature::tanh_sinh<double> ts;
  // Factor out e^{|u|} so the integrand stays O(1).
  const double shift = std::abs(u);
  auto f = [&](double s, double sc) {
    // sc is b - s on the right half and a - s (negative) on the left half
    double one_minus = sc > 0 ? sc : 1.0 - s;
    double one_plus = sc > 0 ? 1.0 + s : -sc;
    return std::exp((k - 1.0) * std::log(one_minus) + k * std::log(one_plus) + s * u - shift);
  };
  double v = ts.integrate(f, -1.0, 1.0, 1e-15);
  double lc = std::lgamma(k + 0.5) - std::lgamma(k) - 0.5 * std::log(std::numbers::pi);
  return std::exp(lc + shift) * v;
}

}  // namespace

// ---------------------------------------------------------------------------
// kernels

void kernel_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out) {
  Ctx c(cfg, p, out);
  const auto& S = c.setup;
  const std::size_t N = c.N;
  const int M = cfg.kernel_samples;
  const std::map<std::string, std::string> sp{{"samples", std::to_string(M)}, {"radius", "4"}};

  c.check("kernel.zero_argument", sp, 1e-12, "abs", [&](CheckRecord& r, std::mt19937_64& rng) {
    double err = 0.0;
    CVec zero(N, 0.0);
    for (int i = 0; i < M; ++i) err = std::max(err, std::abs(dunkl_kernel(S, rand_ball(rng, N, 4), zero) - 1.0));
    r.value = {1.0 + err};
    r.reference = {1.0};
    set_err(r, err, 1.0);
  });

  c.check("kernel.symmetry", sp, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
    double err = 0.0;
    for (int i = 0; i < M; ++i) {
      CVec z = rand_ball(rng, N, 4), w = rand_ball(rng, N, 4);
      double d = std::abs(dunkl_kernel(S, z, w) - dunkl_kernel(S, w, z)) / kernel_magnitude(S, z, w);
      err = std::max(err, d);
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  c.check("kernel.scaling", sp, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
    double err = 0.0;
    for (int i = 0; i < M; ++i) {
      CVec z = rand_ball(rng, N, 4), w = rand_ball(rng, N, 4);
      cplx lam = rand_ball(rng, 1, 1.0)[0];
      CVec lz = scale_vec(z, lam), lw = scale_vec(w, lam);
      double d = std::abs(dunkl_kernel(S, lz, w) - dunkl_kernel(S, z, lw)) / kernel_magnitude(S, lz, w);
      err = std::max(err, d);
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  c.check("kernel.conjugation", sp, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
    double err = 0.0;
    for (int i = 0; i < M; ++i) {
      CVec z = rand_ball(rng, N, 4), w = rand_ball(rng, N, 4);
      cplx a = dunkl_kernel(S, conj_vec(z), conj_vec(w));
      cplx b = std::conj(dunkl_kernel(S, z, w));
      err = std::max(err, std::abs(a - b) / kernel_magnitude(S, z, w));
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  // The multiplicity-free kernel is the exponential of the bilinear form.
  c.check("kernel.exp_reduction", sp, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
    auto Z = zero_like(S);
    double err = 0.0;
    for (int i = 0; i < M; ++i) {
      CVec z = rand_ball(rng, N, 4), w = rand_ball(rng, N, 4);
      cplx dot = 0.0;
      double mag = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        dot += z[j] * w[j];
        mag += std::abs(z[j]) * std::abs(w[j]);
      }
      err = std::max(err, std::abs(dunkl_kernel(Z, z, w) - std::exp(dot)) / std::exp(mag));
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  c.check("kernel.bound", sp, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M; ++i) {
      CVec z = rand_ball(rng, N, 4), w = rand_ball(rng, N, 4);
      double m = kernel_bound_margin(S, z, w) / std::exp(vnorm(z) * vnorm(w));
      worst = std::min(worst, m);
    }
    r.value = {worst};
    r.reference = {0.0};
    r.abs_err = r.rel_err = std::max(0.0, -worst);
    r.note = "value is the smallest relative margin 1 - |E|/exp(|z||w|)";
  });

  // Rank-one factors against their Laplace-type integral representation.
  c.check("kernel.integral_representation", {}, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    double err = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      for (double u : {-16.0, -7.5, -2.0, -0.3, 0.0, 0.4, 1.0, 3.3, 9.0, 16.0}) {
        double a = rank_one_kernel_real(S.k(j), u);
        double b = rank_one_integral(S.k(j), u);
        err = std::max(err, std::abs(a - b) / rank_one_kernel_real(S.k(j), std::abs(u)));
        r.value.push_back(a);
        r.reference.push_back(b);
      }
    r.abs_err = r.rel_err = err;
  });

  // int domega_t(q) rho_t(x, q) = 1.
  c.check("kernel.heat_mass", {{"nodes", std::to_string(cfg.nodes)}}, 1e-9, "rel",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            OmegaIntegrator integ(S, cfg.nodes);
            auto opts = quadrature_kernel_options();
            std::vector<std::vector<double>> xs;
            if (N == 1) {
              for (double x : {0.0, 0.7, -1.5, 2.3, -3.0, 3.0}) xs.push_back({x});
            } else {
              xs.push_back(std::vector<double>(N, 0.0));
              for (int i = 0; i < 5; ++i) xs.push_back(rand_real_ball(rng, N, 3.0));
            }
            double err = 0.0;
            const double t = S.t();
            for (const auto& x : xs) {
              double x2 = 0.0;
              for (double v : x) x2 += v * v;
              cplx m = integ.integrate(1.0 / (2.0 * t), [&](std::span<const double> q) {
                std::vector<double> xs_(x.size()), qs(q.size());
                for (std::size_t j = 0; j < N; ++j) {
                  xs_[j] = x[j] / std::sqrt(t);
                  qs[j] = q[j] / std::sqrt(t);
                }
                double e = 1.0;
                for (std::size_t j = 0; j < N; ++j) e *= rank_one_kernel_real(S.k(j), xs_[j] * qs[j], opts);
                return cplx(std::exp(-x2 / (2.0 * t)) * e);
              });
              r.value.push_back(m.real());
              r.reference.push_back(1.0);
              err = std::max(err, std::abs(m - 1.0));
            }
            r.abs_err = r.rel_err = err;
          });

  // Classical heat kernel: rho_t(x, q) = exp(-(x - q)^2 / 2t) without multiplicities.
  c.check("kernel.gaussian_heat_kernel", {}, 1e-12, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
    auto Z = zero_like(S);
    double err = 0.0;
    for (int i = 0; i < 200; ++i) {
      auto x = rand_real_ball(rng, N, 4), q = rand_real_ball(rng, N, 4);
      double d2 = 0.0;
      for (std::size_t j = 0; j < N; ++j) d2 += (x[j] - q[j]) * (x[j] - q[j]);
      double ref = std::exp(-d2 / (2.0 * S.t()));
      // scale of the largest series term, as for the kernel itself
      double xq = 0.0, x2 = 0.0, q2 = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        xq += std::abs(x[j] * q[j]);
        x2 += x[j] * x[j];
        q2 += q[j] * q[j];
      }
      double scale = std::exp((2.0 * xq - x2 - q2) / (2.0 * S.t()));
      err = std::max(err, std::abs(heat_kernel_real(Z, x, q, S.t()) - ref) / scale);
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });
}

// ---------------------------------------------------------------------------
// quadrature

void quadrature_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out) {
  Ctx c(cfg, p, out);
  const auto& S = c.setup;
  const std::size_t N = c.N;

  c.check("quadrature.normalization", {}, 1e-9, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    double m = gaussian_mass_check(S);
    r.value = {m};
    r.reference = {1.0};
    r.abs_err = r.rel_err = std::abs(m - 1.0);
    r.note = "double-exponential quadrature of e^{-q^2/2t} against the weight";
  });

  // Same mass through a Gauss rule matched to a different envelope.
  c.check("quadrature.normalization_rescaled", {{"nodes", std::to_string(cfg.nodes)}}, 1e-9, "rel",
          [&](CheckRecord& r, std::mt19937_64&) {
            OmegaIntegrator integ(S, cfg.nodes);
            const double t = S.t();
            cplx m = integ.integrate(1.0 / (3.0 * t), [&](std::span<const double> q) {
              double q2 = 0.0;
              for (double v : q) q2 += v * v;
              return cplx(std::exp(-q2 * (1.0 / (2.0 * t) - 1.0 / (3.0 * t))));
            });
            r.value = {m.real()};
            r.reference = {1.0};
            r.abs_err = r.rel_err = std::abs(m - 1.0);
          });

  c.check("quadrature.mms_constant", {}, 1e-10, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    double a = mms_constant_check(S), b = mms_constant(S);
    r.value = {a};
    r.reference = {b};
    set_err(r, std::abs(a - b), std::abs(b));
  });

  c.check("quadrature.mms_t_independence", {}, 1e-10, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    double lo = INFINITY, hi = -INFINITY;
    for (double t : {0.5, 1.0, 2.0}) {
      double v = mms_constant_check(S.at_time(t));
      r.value.push_back(v);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    r.reference = {mms_constant(S)};
    set_err(r, hi - lo, std::abs(r.reference[0]));
  });

  for (int n : {5, 10, 20, 40}) {
    if (n > cfg.nodes) continue;
    c.check("quadrature.moments", {{"n", std::to_string(n)}}, 1e-11, "rel", [&](CheckRecord& r, std::mt19937_64&) {
      double err = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        auto rule = gauss_rule_1d(S.k(j), S.t(), n);
        for (int m = 0; 2 * m <= 2 * n - 1; ++m) {
          double s = integrate_real(rule, [&](std::span<const double> q) { return std::pow(q[0], 2 * m); });
          double ref = moment_oracle(S.k(j), S.t(), m);
          err = std::max(err, std::abs(s - ref) / ref);
          if (m == n - 1) {
            r.value.push_back(s);
            r.reference.push_back(ref);
          }
        }
      }
      r.abs_err = r.rel_err = err;
      r.note = "value/reference: highest even moment per axis";
    });
  }

  c.check("quadrature.odd_moments", {{"n", std::to_string(cfg.nodes)}}, 1e-13, "rel",
          [&](CheckRecord& r, std::mt19937_64&) {
            double err = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
              auto rule = gauss_rule_1d(S.k(j), S.t(), cfg.nodes);
              for (int m = 0; 2 * m + 1 <= 2 * cfg.nodes - 1; ++m) {
                double s = integrate_real(rule, [&](std::span<const double> q) { return std::pow(q[0], 2 * m + 1); });
                double scale = std::sqrt(moment_oracle(S.k(j), S.t(), m) * moment_oracle(S.k(j), S.t(), m + 1));
                err = std::max(err, std::abs(s) / scale);
              }
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
          });

  c.check("quadrature.symmetry", {{"n", std::to_string(cfg.nodes)}}, 0.0, "abs", [&](CheckRecord& r, std::mt19937_64&) {
    double err = 0.0;
    bool positive = true;
    for (std::size_t j = 0; j < N; ++j) {
      auto rule = gauss_rule_1d(S.k(j), S.t(), cfg.nodes);
      const std::size_t n = rule.size();
      for (std::size_t i = 0; i < n; ++i) {
        err = std::max(err, std::abs(rule.nodes[i] + rule.nodes[n - 1 - i]));
        err = std::max(err, std::abs(rule.weights[i] - rule.weights[n - 1 - i]));
        positive = positive && rule.weights[i] > 0.0;
        if (i && !(rule.nodes[i] > rule.nodes[i - 1])) positive = false;
      }
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = positive ? err : 1.0;
    if (!positive) r.note = "weights not positive or nodes not strictly ascending";
  });

  if (N > 1) {
    c.check("quadrature.tensor_moments", {{"n", "10"}}, 1e-11, "rel", [&](CheckRecord& r, std::mt19937_64&) {
      auto rule = tensor_rule(S, 10);
      double err = 0.0;
      std::vector<int> m(N, 0);
      // all even monomials with every exponent <= 19
      std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == N) {
          double s = integrate_real(rule, [&](std::span<const double> q) {
            double v = 1.0;
            for (std::size_t i = 0; i < N; ++i) v *= std::pow(q[i], 2 * m[i]);
            return v;
          });
          double ref = 1.0;
          for (std::size_t i = 0; i < N; ++i) ref *= moment_oracle(S.k(i), S.t(), m[i]);
          err = std::max(err, std::abs(s - ref) / ref);
          return;
        }
        for (m[j] = 0; m[j] <= 9; ++m[j]) rec(j + 1);
      };
      rec(0);
      r.value = {err};
      r.reference = {0.0};
      r.abs_err = r.rel_err = err;
    });
  }

  c.check("quadrature.cache_roundtrip", {{"n", "17"}}, 0.0, "abs", [&](CheckRecord& r, std::mt19937_64&) {
    auto rule = gauss_rule_1d(S.k(0), S.t(), 17);
    auto dir = std::filesystem::temp_directory_path() / ("dunklsb_cache_" + std::to_string(fnv(fmt_list(p.k) + fmt(p.t))));
    std::filesystem::create_directories(dir);
    auto path = dir / RuleCache::file_name(S.k(0), S.t(), 17);
    RuleCache::save(rule, path);
    auto back = RuleCache::load(path);
    std::filesystem::remove_all(dir);
    double err = 0.0;
    if (back.size() != rule.size()) err = 1.0;
    else
      for (std::size_t i = 0; i < rule.size(); ++i)
        err = std::max({err, std::abs(back.nodes[i] - rule.nodes[i]), std::abs(back.weights[i] - rule.weights[i])});
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });
}

// ---------------------------------------------------------------------------
// spaces

namespace {

// Random polynomial of total degree <= deg with standard normal coefficients.
CoeffSeries random_poly(std::mt19937_64& rng, std::size_t N, int deg, int store) {
  std::normal_distribution<double> g;
  CoeffSeries f(N, store);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.layout().total_degree(i) <= deg) f[i] = cplx(g(rng), g(rng));
  return f;
}

double gram_dev(const std::vector<std::vector<cplx>>& G) {
  double d = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G.size(); ++j) d = std::max(d, std::abs(G[i][j] - cplx(i == j ? 1.0 : 0.0)));
  return d;
}

}  // namespace

void spaces_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out) {
  Ctx c(cfg, p, out);
  const auto& S = c.setup;
  const std::size_t N = c.N;
  const int D = cfg.degree;
  const int B = cfg.basis;
  const double t = S.t();
  const double pp = homogeneity(S);

  c.check("spaces.b_reproducing", {{"points", "20"}, {"basis", std::to_string(B)}}, 1e-10, "rel",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            double err = 0.0;
            for (int i = 0; i < 20; ++i) {
              CVec z = rand_ball(rng, N, 2.0);
              CoeffSeries f = random_poly(rng, N, B, D);
              cplx a = b_inner(S, b_kernel(S, z, D), f);
              cplx ref = evaluate(f, z);
              err = std::max(err, std::abs(a - ref) / std::max(1.0, std::abs(ref)));
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
            r.note = "errors relative to max(1, |f(z)|)";
          });

  // f = e^{-z^2/4t} P(z); the reference value is the closed form, not a series.
  c.check("spaces.c_reproducing", {{"points", "20"}, {"basis", std::to_string(B)}, {"degree", std::to_string(D)}},
          1e-8, "rel", [&](CheckRecord& r, std::mt19937_64& rng) {
            double err = 0.0;
            for (int i = 0; i < 20; ++i) {
              CVec z = rand_ball(rng, N, 2.0);
              CoeffSeries P = random_poly(rng, N, B, D);
              CoeffSeries f = gaussian_multiply(P, -1.0 / (4.0 * t));
              cplx a = c_inner(S, c_kernel(S, z, D), f);
              cplx ref = std::exp(-sq_sum(z) / (4.0 * t)) * evaluate(P, z);
              err = std::max(err, std::abs(a - ref) / std::max(1.0, std::abs(ref)));
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
            r.note = "errors relative to max(1, |f(z)|)";
          });

  c.check("spaces.g_kernel_identity", {{"points", "10"}, {"degree", std::to_string(D)}}, 1e-10, "rel",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            auto half = S.at_time(t / 2.0);
            double err = 0.0;
            for (int i = 0; i < 10; ++i) {
              CVec z = i == 0 ? CVec(N, cplx(1.0, 1.0)) : rand_ball(rng, N, 2.0);
              CoeffSeries lhs = g_map(S, c_kernel(S, z, D));
              cplx pref = std::pow(2.0, -pp / 2.0) * std::exp(-sq_sum(conj_vec(z)) / (4.0 * t));
              CoeffSeries rhs = pref * b_kernel(half, scale_vec(z, 0.5), D);
              err = std::max(err, max_coeff_diff(lhs, rhs) / max_coeff_abs(rhs));
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
            r.note = "coefficientwise, relative to the largest coefficient";
          });

  // |z^n|^2 = t^{|n|} prod gamma_{n_j}; without multiplicities these are the Fock norms t^n n!.
  c.check("spaces.b_monomial_norms", {{"degree", "20"}}, 1e-13, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    auto lay = MultiIndexLayout::get(N, 20);
    double err = 0.0;
    for (std::size_t i = 0; i < lay->size(); ++i) {
      auto n = lay->index(i);
      CoeffSeries m = CoeffSeries::monomial(N, 20, n);
      double v = b_norm(S, m) * b_norm(S, m);
      double ref = std::pow(t, lay->total_degree(i));
      for (std::size_t j = 0; j < N; ++j) {
        const double k = S.k(j);
        const int nj = n[j], h = nj / 2;
        if (k == 0.0) {
          ref *= std::tgamma(nj + 1.0);
        } else {
          // 2^{2h} h! (k+1/2)_{h + [n odd]}
          int rise = h + (nj % 2);
          ref *= std::pow(2.0, nj) * std::tgamma(h + 1.0) * std::tgamma(k + 0.5 + rise) / std::tgamma(k + 0.5);
        }
      }
      err = std::max(err, std::abs(v - ref) / ref);
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  c.check("spaces.b_kernel_norm", {{"points", "10"}, {"degree", std::to_string(D)}}, 1e-10, "rel",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            double err = 0.0;
            for (int i = 0; i < 10; ++i) {
              CVec z = rand_ball(rng, N, 2.0);
              double v = b_norm(S, b_kernel(S, z, D));
              v *= v;
              double ref = dunkl_kernel(S, scale_vec(conj_vec(z), 1.0 / std::sqrt(t)), scale_vec(z, 1.0 / std::sqrt(t))).real();
              err = std::max(err, std::abs(v - ref) / ref);
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
          });

  c.check("spaces.c_kernel_norm", {{"points", "10"}, {"degree", std::to_string(D)}}, 1e-8, "rel",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            double err = 0.0;
            for (int i = 0; i < 10; ++i) {
              CVec z = rand_ball(rng, N, 2.0);
              double v = c_norm(S, c_kernel(S, z, D));
              v *= v;
              double ref = (std::pow(2.0, -pp) * heat_kernel(S.at_time(2 * t), conj_vec(z), z, 2 * t)).real();
              err = std::max(err, std::abs(v - ref) / ref);
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
          });

  c.check("spaces.hermite_orthonormality", {{"basis", std::to_string(B)}, {"nodes", std::to_string(cfg.nodes)}},
          1e-10, "abs", [&](CheckRecord& r, std::mt19937_64&) {
            OmegaIntegrator integ(S, cfg.nodes);
            auto hb = hermite_basis(S, B);
            std::vector<std::vector<cplx>> G(hb.size(), std::vector<cplx>(hb.size()));
            for (std::size_t i = 0; i < hb.size(); ++i)
              for (std::size_t j = 0; j < hb.size(); ++j) G[i][j] = l2_inner(integ, hb[i], hb[j]);
            double d = gram_dev(G);
            r.value = {d};
            r.reference = {0.0};
            r.abs_err = r.rel_err = d;
          });

  for (Space which : {Space::B, Space::C}) {
    const std::string id = which == Space::B ? "spaces.b_basis_gram" : "spaces.c_basis_gram";
    c.check(id, {{"basis", std::to_string(B)}, {"degree", std::to_string(D)}}, 1e-10, "abs",
            [&](CheckRecord& r, std::mt19937_64&) {
              auto basis = gs_orthonormal_basis({which, S}, B, D);
              std::vector<std::vector<cplx>> G(basis.size(), std::vector<cplx>(basis.size()));
              for (std::size_t i = 0; i < basis.size(); ++i)
                for (std::size_t j = 0; j < basis.size(); ++j)
                  G[i][j] = which == Space::B ? b_inner(S, basis[i], basis[j]) : c_inner(S, basis[i], basis[j]);
              double d = gram_dev(G);
              r.value = {d};
              r.reference = {0.0};
              r.abs_err = r.rel_err = d;
            });
  }

  c.check("spaces.dilation_unitarity", {{"nodes", std::to_string(cfg.nodes)}}, 1e-10, "abs",
          [&](CheckRecord& r, std::mt19937_64&) {
            OmegaIntegrator integ(S, cfg.nodes);
            auto hb = hermite_basis(S, 5);
            double err = 0.0;
            for (double lam : {0.5, 2.0, 3.0}) {
              std::vector<SampledFunction> d;
              for (const auto& h : hb) d.push_back(dilation_l2(S, lam, h));
              std::vector<std::vector<cplx>> G(d.size(), std::vector<cplx>(d.size()));
              std::vector<std::vector<cplx>> G0 = G;
              for (std::size_t i = 0; i < d.size(); ++i)
                for (std::size_t j = 0; j < d.size(); ++j) {
                  G[i][j] = l2_inner(integ, d[i], d[j]);
                  G0[i][j] = l2_inner(integ, hb[i], hb[j]);
                }
              for (std::size_t i = 0; i < d.size(); ++i)
                for (std::size_t j = 0; j < d.size(); ++j) err = std::max(err, std::abs(G[i][j] - G0[i][j]));
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
          });
}

// ---------------------------------------------------------------------------
// transforms

namespace {

std::vector<SampledFunction> isometry_family(const MultiplicitySetup& S, std::mt19937_64& rng, int max_deg,
                                             int combos) {
  auto hb = hermite_basis(S, max_deg);
  std::normal_distribution<double> g;
  std::vector<SampledFunction> fam = hb;
  for (int i = 0; i < combos; ++i) {
    std::vector<cplx> cs(hb.size());
    double n2 = 0.0;
    for (auto& v : cs) {
      v = {g(rng), g(rng)};
      n2 += std::norm(v);
    }
    for (auto& v : cs) v /= std::sqrt(n2);
    auto f = linear_combination(cs, hb);
    f.label = "combo" + std::to_string(i);
    fam.push_back(std::move(f));
  }
  return fam;
}

std::vector<std::vector<double>> sample_points(std::mt19937_64& rng, std::size_t N, double r, int n) {
  std::vector<std::vector<double>> xs;
  if (N == 1) {
    for (double x : {0.0, 0.45, -1.1, 1.7}) xs.push_back({x});
    return xs;
  }
  for (int i = 0; i < n; ++i) xs.push_back(rand_real_ball(rng, N, r));
  return xs;
}

}  // namespace

void transforms_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out) {
  Ctx c(cfg, p, out);
  const auto& S = c.setup;
  const std::size_t N = c.N;
  const int D = cfg.degree;
  const double t = S.t();
  const double pp = homogeneity(S);
  OmegaIntegrator integ(S, cfg.nodes);
  const std::map<std::string, std::string> base{{"nodes", std::to_string(cfg.nodes)}, {"degree", std::to_string(D)}};
  auto with = [&](std::map<std::string, std::string> m) {
    m.insert(base.begin(), base.end());
    return m;
  };

  // Isometry and Gram of images, for both transforms.
  for (bool is_a : {true, false}) {
    const std::string name = is_a ? "A" : "C";
    const double tol = is_a ? 1e-7 : 1e-6;
    auto tf = [&](const SampledFunction& f) { return is_a ? transform_A(integ, f, D) : transform_C(integ, f, D); };
    auto nrm = [&](const CoeffSeries& s) { return is_a ? b_norm(S, s) : c_norm(S, s); };
    auto inner = [&](const CoeffSeries& a, const CoeffSeries& b) { return is_a ? b_inner(S, a, b) : c_inner(S, a, b); };

    c.check("transforms." + name + "_isometry", with({{"basis", "8"}, {"combos", "5"}}), tol, "rel",
            [&](CheckRecord& r, std::mt19937_64& rng) {
              auto fam = isometry_family(S, rng, 8, 5);
              double err = 0.0;
              for (const auto& f : fam) {
                double a = nrm(tf(f));
                double b = l2_norm(integ, f);
                err = std::max(err, std::abs(a - b) / b);
              }
              r.value = {err};
              r.reference = {0.0};
              r.abs_err = r.rel_err = err;
            });

    c.check("transforms." + name + "_gram", with({{"basis", "6"}}), tol, "abs", [&](CheckRecord& r, std::mt19937_64&) {
      auto hb = hermite_basis(S, 6);
      std::vector<CoeffSeries> im;
      for (const auto& h : hb) im.push_back(tf(h));
      std::vector<std::vector<cplx>> G(im.size(), std::vector<cplx>(im.size()));
      for (std::size_t i = 0; i < im.size(); ++i)
        for (std::size_t j = 0; j < im.size(); ++j) G[i][j] = inner(im[i], im[j]);
      double d = gram_dev(G);
      r.value = {d};
      r.reference = {0.0};
      r.abs_err = r.rel_err = d;
    });
  }

  auto low = hermite_basis(S, 4);

  // e^{s1 Delta/2} e^{s2 Delta/2} = e^{(s1+s2) Delta/2}.
  c.check("transforms.semigroup", with({}), 1e-8, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    auto xs = sample_points(rng, N, 2.0, 4);
    double err = 0.0, scale = 0.0;
    for (const auto& psi : {low[1], low.back()}) {
      auto two = heat_apply(integ, 0.4 * t, heat_apply(integ, 0.6 * t, psi));
      auto one = heat_apply(integ, t, psi);
      for (const auto& x : xs) {
        cplx a = two(x), b = one(x);
        err = std::max(err, std::abs(a - b));
        scale = std::max(scale, std::abs(b));
      }
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });

  // R C = e^{t Delta/2}.
  c.check("transforms.RC_heat", with({}), 1e-8, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    auto xs = sample_points(rng, N, 2.0, 4);
    double err = 0.0, scale = 0.0;
    for (const auto& psi : low) {
      auto rc = restrict(transform_C(integ, psi, D));
      auto h = heat_apply(integ, t, psi);
      for (const auto& x : xs) {
        cplx b = h(x);
        err = std::max(err, std::abs(rc(x) - b));
        scale = std::max(scale, std::abs(b));
      }
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });

  // R R* = e^{t Delta}.
  c.check("transforms.RRstar_heat", with({}), 1e-8, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    auto xs = sample_points(rng, N, 2.0, 4);
    double err = 0.0, scale = 0.0;
    for (const auto& psi : low) {
      auto rr = restrict(restrict_adjoint(integ, psi, D));
      auto h = heat_apply(integ, 2.0 * t, psi);
      for (const auto& x : xs) {
        cplx b = h(x);
        err = std::max(err, std::abs(rr(x) - b));
        scale = std::max(scale, std::abs(b));
      }
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });

  // R* psi(-ix) = e^{x^2/4t} F_{2t}(e^{-q^2/4t} psi)(x).
  c.check("transforms.dunkl_identity", with({}), 1e-8, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    auto xs = sample_points(rng, N, 1.5, 4);
    double err = 0.0, scale = 0.0;
    for (const auto& psi : {low[0], low[2], low.back()}) {
      auto rs = restrict_adjoint(integ, psi, D);
      SampledFunction phi = psi;
      phi.envelope += 1.0 / (4.0 * t);
      auto ft = dunkl_transform(integ, 2.0 * t, phi);
      for (const auto& x : xs) {
        CVec z(N);
        double x2 = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          z[j] = cplx(0.0, -x[j]);
          x2 += x[j] * x[j];
        }
        cplx a = evaluate(rs, z);
        cplx b = std::exp(x2 / (4.0 * t)) * ft(x);
        err = std::max(err, std::abs(a - b));
        scale = std::max(scale, std::abs(b));
      }
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });

  // R* computed from the time-t measure agrees with C at time 2t.
  c.check("transforms.restrict_adjoint_routes", with({}), 1e-10, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    auto integ2 = integ.at_time(2.0 * t);
    double err = 0.0;
    for (const auto& psi : low) {
      auto a = restrict_adjoint(integ, psi, D);
      auto b = transform_C(integ2, psi, D);
      err = std::max(err, max_coeff_diff(a, b) / max_coeff_abs(b));
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  // <R L_w, psi>_{L2} = <L_w, R* psi>_C = R* psi(w), with R L_w in closed form.
  c.check("transforms.adjointness", with({}), 1e-8, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    const auto S2 = S.at_time(2.0 * t);
    const double pre = std::pow(2.0, -pp);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 4; ++i) {
      CVec w = rand_ball(rng, N, 1.5);
      CVec wb = conj_vec(w);
      auto rl = make_sampled("R L_w", [=](std::span<const double> x) {
        CVec xc(x.begin(), x.end());
        return pre * heat_kernel(S2, wb, xc, 2.0 * t, quadrature_kernel_options());
      });
      for (const auto& psi : {low[1], low[3]}) {
        auto rs = restrict_adjoint(integ, psi, D);
        cplx lhs = l2_inner(integ, rl, psi);
        cplx mid = c_inner(S, c_kernel(S, w, D), rs);
        cplx rhs = evaluate(rs, w);
        err = std::max({err, std::abs(lhs - rhs), std::abs(mid - rhs)});
        scale = std::max(scale, std::abs(rhs));
      }
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });

  c.check("transforms.diagram", with({}), 1e-7, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    std::vector<CVec> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(rand_ball(rng, N, 1.0));
    double err = 0.0, scale = 0.0;
    for (const auto& psi : low) {
      auto rep = diagram_check(integ, psi, D, pts);
      err = std::max({err, rep.max_coeff_err, rep.max_point_err});
      scale = std::max(scale, rep.scale);
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });

  c.check("transforms.ca_relation", {{"grid", "5x5"}}, 1e-10, "abs", [&](CheckRecord& r, std::mt19937_64& rng) {
    std::vector<CVec> zs;
    std::vector<std::vector<double>> qs;
    for (int i = 0; i < 5; ++i) {
      zs.push_back(rand_ball(rng, N, 2.0));
      qs.push_back(rand_real_ball(rng, N, 3.0));
    }
    double e = ca_relation_check(S, zs, qs);
    r.value = {e};
    r.reference = {0.0};
    r.abs_err = r.rel_err = e;
  });

  // F1 R F2* f against the closed form 2^{-p} e^{-x^2/8t} f(x/2).
  c.check("transforms.not_restriction", {{"degree", std::to_string(D)}}, 1e-8, "either",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            auto xs = sample_points(rng, N, 2.0, 4);
            double err = 0.0, scale = 0.0;
            std::vector<CoeffSeries> fs{c_kernel(S, CVec(N, 0.0), D), random_poly(rng, N, 6, D)};
            for (const auto& f : fs) {
              auto comp = f1_op(S, restrict(f2_adjoint(S, f)));
              auto direct = not_restriction_op(S, f);
              for (const auto& x : xs) {
                std::vector<double> xh(x);
                double x2 = 0.0;
                for (auto& v : xh) {
                  x2 += v * v;
                  v *= 0.5;
                }
                cplx ref = std::pow(2.0, -pp) * std::exp(-x2 / (8.0 * t)) * evaluate_real(f, xh);
                err = std::max({err, std::abs(comp(x) - ref), std::abs(direct(x) - ref)});
                scale = std::max(scale, std::abs(ref));
              }
            }
            r.value = {err};
            r.reference = {0.0};
            set_err(r, err, scale);
          });

  // F1 R F2* is bounded by 1 from B to L^2.
  c.check("transforms.not_restriction_bound", with({{"basis", "8"}}), 1e-6, "abs",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            auto basis = gs_orthonormal_basis({Space::B, S}, 8, D);
            std::normal_distribution<double> g;
            for (int i = 0; i < 5; ++i) {
              CoeffSeries f(N, D);
              for (const auto& b : basis) f += cplx(g(rng), g(rng)) * b;
              basis.push_back(f);
            }
            double worst = 0.0;
            for (const auto& f : basis) {
              double q = l2_norm(integ, not_restriction_op(S, f)) / b_norm(S, f);
              worst = std::max(worst, q);
            }
            r.value = {worst};
            r.reference = {1.0};
            r.abs_err = r.rel_err = std::max(0.0, worst - 1.0);
            r.note = "value is the largest norm ratio";
          });

  c.check("transforms.kernel_identities", with({}), 1e-8, "abs", [&](CheckRecord& r, std::mt19937_64& rng) {
    std::vector<CVec> zs, ws;
    std::vector<std::vector<double>> qs;
    for (int i = 0; i < 4; ++i) {
      zs.push_back(rand_ball(rng, N, 1.5));
      ws.push_back(rand_ball(rng, N, 1.5));
      qs.push_back(rand_real_ball(rng, N, 3.0));
    }
    auto rep = kernel_identities_check(integ, zs, ws, qs);
    r.value = {rep.a_over_rho_err, rep.k_integral_err};
    r.reference = {0.0, 0.0};
    r.abs_err = r.rel_err = std::max(rep.a_over_rho_err, rep.k_integral_err);
  });

  // F2 = D_{1/sqrt2} G.
  c.check("transforms.f2_factorization", {{"degree", std::to_string(D)}}, 1e-12, "rel",
          [&](CheckRecord& r, std::mt19937_64& rng) {
            double err = 0.0;
            for (int i = 0; i < 3; ++i) {
              CoeffSeries f = gaussian_multiply(random_poly(rng, N, 8, D), -1.0 / (4.0 * t));
              auto a = f2_op(S, f);
              auto b = dilate_series(g_map(S, f), 1.0 / std::sqrt(2.0));
              err = std::max(err, max_coeff_diff(a, b) / max_coeff_abs(b));
              // and F2* undoes F2 on the stored prefix
              auto back = f2_adjoint(S, a);
              err = std::max(err, max_coeff_diff(resize_series(back, 10), resize_series(f, 10)) / max_coeff_abs(f));
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
          });

  c.check("transforms.f2_unitarity", {{"degree", std::to_string(D)}}, 1e-8, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    auto basis = gs_orthonormal_basis({Space::C, S}, 6, D);
    double err = 0.0;
    for (const auto& f : basis) err = std::max(err, std::abs(b_norm(S, f2_op(S, f)) - 1.0));
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  c.check("transforms.f1_unitarity", {{"nodes", std::to_string(cfg.nodes)}}, 1e-10, "abs",
          [&](CheckRecord& r, std::mt19937_64&) {
            double err = 0.0;
            for (const auto& psi : low) {
              err = std::max(err, std::abs(l2_norm(integ, f1_op(S, psi)) - 1.0));
              err = std::max(err, std::abs(l2_norm(integ, f1_adjoint(S, psi)) - 1.0));
              err = std::max(err, std::abs(l2_inner(integ, psi, f1_adjoint(S, f1_op(S, psi))) - 1.0));
            }
            r.value = {err};
            r.reference = {0.0};
            r.abs_err = r.rel_err = err;
          });

  // Series transforms against direct per-point quadrature.
  c.check("transforms.pointwise_crosscheck", with({}), 1e-9, "either", [&](CheckRecord& r, std::mt19937_64& rng) {
    double err = 0.0, scale = 0.0;
    for (const auto& psi : {low[1], low.back()}) {
      auto a = transform_A(integ, psi, D);
      auto cc = transform_C(integ, psi, D);
      for (int i = 0; i < 5; ++i) {
        CVec z = rand_ball(rng, N, 1.5);
        cplx va = transform_A_at(integ, psi, z), vc = transform_C_at(integ, psi, z);
        err = std::max({err, std::abs(evaluate(a, z) - va), std::abs(evaluate(cc, z) - vc)});
        scale = std::max({scale, std::abs(va), std::abs(vc)});
      }
    }
    r.value = {err};
    r.reference = {0.0};
    set_err(r, err, scale);
  });
}

// ---------------------------------------------------------------------------
// polar

void polar_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out) {
  Ctx c(cfg, p, out);
  const auto& S = c.setup;
  const std::size_t N = c.N;
  const std::map<std::string, std::string> base{{"nodes", std::to_string(cfg.nodes)},
                                                {"degree", std::to_string(cfg.degree)},
                                                {"basis", std::to_string(cfg.basis)}};

  RestrictionOptions opts;
  opts.max_deg = cfg.basis;
  opts.degree = cfg.degree;
  opts.nodes = cfg.nodes;
  RestrictionReport rep;
  std::string harness_error;
  double harness_ms = 0.0;
  {
    auto t0 = std::chrono::steady_clock::now();
    try {
      rep = verify_restriction_principle(S, opts);
    } catch (const std::exception& e) {
      harness_error = e.what();
    }
    harness_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  auto need = [&] {
    if (!harness_error.empty()) throw std::runtime_error(harness_error);
  };

  c.check("polar.U_equals_C", base, 1e-5, "rel", [&](CheckRecord& r, std::mt19937_64&) {
    need();
    r.value = {rep.u_minus_c, rep.rrstar_minus_heat, rep.literal_u_minus_c};
    r.reference = {0.0, 0.0, 0.0};
    r.abs_err = r.rel_err = rep.u_minus_c;
    r.runtime_ms = harness_ms;
    r.note = "value = [max|W-[C]|, max|[R][R*]-[heat]| (truncation residual), max|W-[C]| with codomain basis+8 (-1: "
             "rank deficient)]; domain " + std::to_string(rep.domain_size) + ", codomain " +
             std::to_string(rep.codomain_size) + ", compared columns " + std::to_string(rep.compared_columns);
  });

  c.check("polar.sigma_range", base, 1e-8, "abs", [&](CheckRecord& r, std::mt19937_64&) {
    need();
    r.value = {rep.sigma_min, rep.sigma_max};
    r.reference = {0.0, 1.0};
    r.abs_err = r.rel_err = std::max(0.0, rep.sigma_max - 1.0) + (rep.sigma_min > 0.0 ? 0.0 : 1.0);
    r.note = "requires 0 < sigma_min and sigma_max <= 1 + tol";
  });

  c.check("polar.C_isometry_block", base, 1e-6, "abs", [&](CheckRecord& r, std::mt19937_64&) {
    need();
    r.value = {rep.c_isometry_dev};
    r.reference = {0.0};
    r.abs_err = r.rel_err = rep.c_isometry_dev;
  });

  c.check("polar.cross_parity", base, 1e-12, "abs", [&](CheckRecord& r, std::mt19937_64&) {
    need();
    r.value = {rep.cross_parity_max};
    r.reference = {0.0};
    r.abs_err = r.rel_err = rep.cross_parity_max;
  });

  // Polar factors ignore positive scalings; at t = 1 also for S* and c^{1/2} S*.
  c.check("polar.scale_invariance", base, 1e-12, "abs", [&](CheckRecord& r, std::mt19937_64&) {
    const int md = cfg.basis;
    auto hm = harness_matrices(S, md, md + 8, 0, cfg.nodes);
    double err = 0.0;
    auto W = polar_factor(hm.rstar);
    for (double lam : {std::sqrt(mms_constant(S)), 3.7, 0.02})
      err = std::max(err, (polar_factor(lam * hm.rstar) - W).cwiseAbs().maxCoeff());
    if (S.t() == 1.0) {
      OmegaIntegrator integ(S, cfg.nodes);
      auto dom = gs_orthonormal_basis({Space::B, S}, md, cfg.degree);
      auto cod = hermite_basis(S, md + 8);
      // M = [cod]^* diag(w) [S* dom] on one rule matched to the product envelope
      std::vector<SampledFunction> img;
      for (const auto& f : dom) img.push_back(sbso_adjoint(S, f));
      auto rule = integ.weighted_rule(cod[0].envelope + img[0].envelope);
      const auto n = static_cast<Eigen::Index>(rule.size());
      Eigen::MatrixXcd A(n, cod.size()), Bm(n, img.size());
      for (Eigen::Index q = 0; q < n; ++q) {
        auto x = rule.node(q);
        for (std::size_t i = 0; i < cod.size(); ++i) A(q, i) = std::conj(cod[i].core(x)) * rule.weights[q];
        for (std::size_t j = 0; j < img.size(); ++j) Bm(q, j) = img[j].core(x);
      }
      Eigen::MatrixXcd M = A.transpose() * Bm;
      auto Ws = polar_factor(M);
      err = std::max(err, (polar_factor(std::sqrt(mms_constant(S)) * M) - Ws).cwiseAbs().maxCoeff());
      r.note = "includes S* at t = 1";
    }
    r.value = {err};
    r.reference = {0.0};
    r.abs_err = r.rel_err = err;
  });

  if (N == 1) {
    c.check("polar.monotone_in_degree", {{"nodes", std::to_string(cfg.nodes)}, {"basis", "8"}}, 0.2, "abs",
            [&](CheckRecord& r, std::mt19937_64&) {
              double worst = 0.0;
              for (int D = 24; D <= 40; D += 4) {
                RestrictionOptions o;
                o.max_deg = 8;
                o.degree = D;
                o.nodes = cfg.nodes;
                auto rr = verify_restriction_principle(S, o);
                if (!r.value.empty()) worst = std::max(worst, rr.u_minus_c / r.value.back() - 1.0);
                r.value.push_back(rr.u_minus_c);
              }
              r.reference = {};
              r.abs_err = r.rel_err = std::max(0.0, worst);
              r.note = "value = max|W-[C]| for D = 24,28,...,40; error is the largest relative increase";
            });
  }

  if (S.t() == 1.0) {
    const double pp = homogeneity(S);
    std::vector<double> widths{2.0, 20.0}, q;
    c.check("polar.norm_probe", {{"nodes", std::to_string(cfg.probe_nodes)}, {"width", "20"}}, 0.01, "abs",
            [&](CheckRecord& r, std::mt19937_64&) {
              for (double w : widths) q.push_back(operator_norm_probe(S, w, cfg.probe_nodes).quotient);
              r.value = q;
              r.reference = {1.0, 1.0};
              double e = std::max(0.0, 1.0 - q[1]);
              // never above 1, and growing with the width
              if (q[0] > 1.0 + 1e-10 || q[1] > 1.0 + 1e-10 || !(q[0] < q[1])) e = 1.0;
              r.abs_err = r.rel_err = e;
              r.note = "value = quotient at widths 2 and 20; requires width 20 >= 0.99";
            });
    // <psi, e^{t Delta} psi>/|psi|^2 = (1 + t/width^2)^{-p} for a Gaussian.
    c.check("polar.norm_probe_closed_form", {{"nodes", std::to_string(cfg.probe_nodes)}}, 1e-8, "rel",
            [&](CheckRecord& r, std::mt19937_64&) {
              if (q.size() != widths.size()) throw std::runtime_error("probe did not run");
              double err = 0.0;
              for (std::size_t i = 0; i < widths.size(); ++i) {
                double ref = std::pow(1.0 + S.t() / (widths[i] * widths[i]), -pp);
                r.reference.push_back(ref);
                err = std::max(err, std::abs(q[i] - ref) / ref);
              }
              r.value = q;
              r.abs_err = r.rel_err = err;
            });
  }
}

}  // namespace dunklsb
