#include "dunklsb/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "dunklsb/special.hpp"

namespace dunklsb {

std::vector<double> jacobi_offdiagonals(double k, double t, int n) {
  if (n < 1) throw std::invalid_argument("jacobi_offdiagonals: n must be >= 1");
  std::vector<double> beta(n);
  for (int m = 1; m <= n; ++m) beta[m - 1] = t * (m + ((m & 1) ? 2.0 * k : 0.0));
  return beta;
}

void symmetric_tridiagonal_eigen(std::vector<double>& d, std::vector<double> e,
                                 std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  z.assign(n, 0.0);
  z[0] = 1.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) + dd == dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw std::runtime_error("symmetric_tridiagonal_eigen: no convergence for eigenvalue " +
                                   std::to_string(l));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

QuadratureRule gauss_rule_1d(double k, double t, int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule_1d: n must be >= 1");
  if (!(k >= 0.0) || !(t > 0.0)) throw std::invalid_argument("gauss_rule_1d: need k >= 0, t > 0");
  std::vector<double> d(n, 0.0), e, z;
  if (n > 1) {
    auto beta = jacobi_offdiagonals(k, t, n - 1);
    e.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) e[i] = std::sqrt(beta[i]);
  }
  symmetric_tridiagonal_eigen(d, e, z);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = d[idx[i]];
    w[i] = z[idx[i]] * z[idx[i]];
  }
  for (int i = 0; i < n / 2; ++i) {
    const double xs = 0.5 * (x[n - 1 - i] - x[i]);
    const double ws = 0.5 * (w[n - 1 - i] + w[i]);
    x[i] = -xs;
    x[n - 1 - i] = xs;
    w[i] = w[n - 1 - i] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& wi : w) wi /= total;

  QuadratureRule rule;
  rule.dim = 1;
  rule.nodes = std::move(x);
  rule.weights = std::move(w);
  rule.order = n;
  rule.k = {k};
  rule.t = t;
  return rule;
}

std::vector<double> log_christoffel_weights(const QuadratureRule& rule) {
  if (rule.dim != 1) throw std::invalid_argument("log_christoffel_weights: 1-D rule required");
  const int n = rule.order;
  const auto beta = jacobi_offdiagonals(rule.k.front(), rule.t, n);
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    double prev = 0.0, cur = 1.0, sum = 1.0, log_scale = 0.0;
    for (int m = 0; m + 1 < n; ++m) {
      const double next = (x * cur - (m > 0 ? std::sqrt(beta[m - 1]) * prev : 0.0)) / std::sqrt(beta[m]);
      prev = cur;
      cur = next;
      sum += cur * cur;
      if (std::abs(cur) > 1e100) {
        prev *= 1e-100;
        cur *= 1e-100;
        sum *= 1e-200;
        log_scale += 200.0 * std::log(10.0);
      }
    }
    out[i] = -(std::log(sum) + log_scale);
  }
  return out;
}

namespace {

QuadratureRule tensor_of(const std::vector<const QuadratureRule*>& axes,
                         const std::vector<double>& factors) {
  const std::size_t dim = axes.size();
  double total = 1.0;
  for (auto* a : axes) total *= static_cast<double>(a->size());
  if (total > 1e7) throw std::length_error("tensor rule would exceed 10^7 nodes");
  const std::size_t count = static_cast<std::size_t>(total);

  QuadratureRule out;
  out.dim = dim;
  out.order = axes.front()->order;
  out.t = axes.front()->t;
  out.nodes.resize(count * dim);
  out.weights.resize(count);
  for (auto* a : axes) out.k.push_back(a->k.front());

  std::vector<std::size_t> digit(dim, 0);
  for (std::size_t i = 0; i < count; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      out.nodes[i * dim + j] = axes[j]->nodes[digit[j]];
      w *= axes[j]->weights[digit[j]] * factors[j];
    }
    out.weights[i] = w;
    for (std::size_t j = dim; j-- > 0;) {
      if (++digit[j] < axes[j]->size()) break;
      digit[j] = 0;
    }
  }
  return out;
}

}  // namespace

QuadratureRule tensor_rule(const MultiplicitySetup& setup, int n_per_dim) {
  if (n_per_dim < 1) throw std::invalid_argument("tensor_rule: n_per_dim must be >= 1");
  if (std::pow(static_cast<double>(n_per_dim), static_cast<double>(setup.dim())) > 1e7)
    throw std::length_error("tensor rule would exceed 10^7 nodes");
  std::vector<std::shared_ptr<const QuadratureRule>> keep;
  std::vector<const QuadratureRule*> axes;
  for (std::size_t j = 0; j < setup.dim(); ++j) {
    keep.push_back(RuleCache::global().get(setup.k(j), setup.t(), n_per_dim));
    axes.push_back(keep.back().get());
  }
  return tensor_of(axes, std::vector<double>(setup.dim(), 1.0));
}

cplx integrate(const QuadratureRule& rule, const std::function<cplx(std::span<const double>)>& f) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    cplx v;
    try {
      v = f(rule.node(i));
    } catch (const std::exception& ex) {
      throw std::runtime_error("integrate: evaluation failed at node " + std::to_string(i) + ": " +
                               ex.what());
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

double integrate_real(const QuadratureRule& rule,
                      const std::function<double(std::span<const double>)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double v;
    try {
      v = f(rule.node(i));
    } catch (const std::exception& ex) {
      throw std::runtime_error("integrate: evaluation failed at node " + std::to_string(i) + ": " +
                               ex.what());
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

double moment_oracle(double k, double t, int j) {
  return std::pow(2.0 * t, j) * rising_factorial(k + 0.5, static_cast<unsigned>(j));
}

// ---------------------------------------------------------------------------
// RuleCache

struct RuleCache::Impl {
  mutable std::mutex mu;
  std::map<std::tuple<double, double, int>, std::shared_ptr<const QuadratureRule>> rules;
  std::optional<std::filesystem::path> dir;
};

RuleCache::RuleCache() : impl_(std::make_shared<Impl>()) {}

RuleCache& RuleCache::global() {
  static RuleCache cache;
  return cache;
}

void RuleCache::set_directory(std::optional<std::filesystem::path> dir) {
  std::lock_guard lock(impl_->mu);
  impl_->dir = std::move(dir);
}

std::optional<std::filesystem::path> RuleCache::directory() const {
  std::lock_guard lock(impl_->mu);
  return impl_->dir;
}

void RuleCache::clear() {
  std::lock_guard lock(impl_->mu);
  impl_->rules.clear();
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string digits17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

std::filesystem::path RuleCache::file_name(double k, double t, int n) {
  return "q_" + shortest(k) + "_" + shortest(t) + "_" + std::to_string(n) + ".json";
}

void RuleCache::save(const QuadratureRule& rule, const std::filesystem::path& path) {
  if (rule.dim != 1) throw std::invalid_argument("RuleCache::save: only 1-D rules are cached");
  // Numbers are written by hand so every value carries 17 significant digits.
  std::ostringstream os;
  os << "{\"schema\":\"quadrule/1\",\"k\":" << digits17(rule.k.front())
     << ",\"t\":" << digits17(rule.t) << ",\"n\":" << rule.order << ",\"nodes\":[";
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) os << (i ? "," : "") << digits17(rule.nodes[i]);
  os << "],\"weights\":[";
  for (std::size_t i = 0; i < rule.weights.size(); ++i)
    os << (i ? "," : "") << digits17(rule.weights[i]);
  os << "]}\n";

  std::ostringstream tag;
  tag << std::this_thread::get_id();
  auto tmp = path;
  tmp += ".tmp." + tag.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("RuleCache: cannot write " + tmp.string());
    out << os.str();
  }
  std::filesystem::rename(tmp, path);
}

QuadratureRule RuleCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("RuleCache: cannot read " + path.string());
  auto j = nlohmann::json::parse(in);
  if (j.at("schema") != "quadrule/1")
    throw std::runtime_error("RuleCache: unexpected schema in " + path.string());
  QuadratureRule rule;
  rule.dim = 1;
  rule.k = {j.at("k").get<double>()};
  rule.t = j.at("t").get<double>();
  rule.order = j.at("n").get<int>();
  rule.nodes = j.at("nodes").get<std::vector<double>>();
  rule.weights = j.at("weights").get<std::vector<double>>();
  if (rule.nodes.size() != static_cast<std::size_t>(rule.order) ||
      rule.weights.size() != rule.nodes.size())
    throw std::runtime_error("RuleCache: inconsistent sizes in " + path.string());
  return rule;
}

std::shared_ptr<const QuadratureRule> RuleCache::get(double k, double t, int n) {
  std::lock_guard lock(impl_->mu);
  auto key = std::make_tuple(k, t, n);
  if (auto it = impl_->rules.find(key); it != impl_->rules.end()) return it->second;

  std::shared_ptr<const QuadratureRule> rule;
  if (impl_->dir) {
    auto path = *impl_->dir / file_name(k, t, n);
    if (std::filesystem::exists(path)) {
      try {
        auto loaded = load(path);
        if (loaded.k.front() == k && loaded.t == t)
          rule = std::make_shared<const QuadratureRule>(std::move(loaded));
      } catch (const std::exception&) {
        rule.reset();
      }
    }
    if (!rule) {
      rule = std::make_shared<const QuadratureRule>(gauss_rule_1d(k, t, n));
      std::filesystem::create_directories(*impl_->dir);
      save(*rule, path);
    }
  } else {
    rule = std::make_shared<const QuadratureRule>(gauss_rule_1d(k, t, n));
  }
  impl_->rules.emplace(key, rule);
  return rule;
}

// ---------------------------------------------------------------------------
// OmegaIntegrator

OmegaIntegrator::OmegaIntegrator(MultiplicitySetup setup, int nodes_per_dim)
    : setup_(std::move(setup)), n_(nodes_per_dim) {
  if (n_ < 1) throw std::invalid_argument("OmegaIntegrator: nodes_per_dim must be >= 1");
}

OmegaIntegrator::AxisRule OmegaIntegrator::axis_rule(std::size_t j, double envelope) const {
  if (!(envelope > 0.0))
    throw std::invalid_argument("OmegaIntegrator: integrand needs a decaying Gaussian envelope");
  const double T = 1.0 / (2.0 * envelope);
  return {RuleCache::global().get(setup_.k(j), T, n_),
          std::pow(T / setup_.t(), setup_.k(j) + 0.5)};
}

QuadratureRule OmegaIntegrator::weighted_rule(double envelope) const {
  std::vector<AxisRule> ax;
  std::vector<const QuadratureRule*> axes;
  std::vector<double> factors;
  for (std::size_t j = 0; j < setup_.dim(); ++j) {
    ax.push_back(axis_rule(j, envelope));
    axes.push_back(ax.back().rule.get());
    factors.push_back(ax.back().factor);
  }
  return tensor_of(axes, factors);
}

cplx OmegaIntegrator::integrate(double envelope,
                                const std::function<cplx(std::span<const double>)>& g) const {
  return dunklsb::integrate(weighted_rule(envelope), g);
}

}  // namespace dunklsb
