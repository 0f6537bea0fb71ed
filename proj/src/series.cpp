#include "dunklsb/series.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace dunklsb {

MultiIndexLayout::MultiIndexLayout(std::size_t dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1) throw std::invalid_argument("MultiIndexLayout: dim must be >= 1");
  if (degree < 0) throw std::invalid_argument("MultiIndexLayout: degree must be >= 0");
  double box = std::pow(degree + 1.0, static_cast<double>(dim));
  if (box > 5e7) throw std::length_error("MultiIndexLayout: index box too large");
  box_.assign(static_cast<std::size_t>(box), -1);

  std::vector<int> n(dim, 0);
  for (int d = 0; d <= degree; ++d) {
    offsets_.push_back(total_.size());
    // All compositions of d into dim parts, first coordinate descending.
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int rest) {
      if (j + 1 == dim) {
        n[j] = rest;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < dim; ++i) pos = pos * (degree + 1) + n[i];
        box_[pos] = static_cast<long>(total_.size());
        alpha_.insert(alpha_.end(), n.begin(), n.end());
        total_.push_back(d);
        return;
      }
      for (int v = rest; v >= 0; --v) {
        n[j] = v;
        rec(j + 1, rest - v);
      }
    };
    rec(0, d);
  }
  offsets_.push_back(total_.size());
}

std::shared_ptr<const MultiIndexLayout> MultiIndexLayout::get(std::size_t dim, int degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const MultiIndexLayout>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{dim, degree}];
  if (!slot) slot = std::make_shared<const MultiIndexLayout>(dim, degree);
  return slot;
}

long MultiIndexLayout::find(std::span<const int> n) const {
  if (n.size() != dim_) throw std::invalid_argument("MultiIndexLayout::find: dimension mismatch");
  int tot = 0;
  std::size_t pos = 0;
  for (int v : n) {
    if (v < 0) return -1;
    tot += v;
    if (tot > degree_) return -1;
    pos = pos * (degree_ + 1) + v;
  }
  return box_[pos];
}

// ---------------------------------------------------------------------------

CoeffSeries::CoeffSeries(std::size_t dim, int degree) : CoeffSeries(MultiIndexLayout::get(dim, degree)) {}

CoeffSeries::CoeffSeries(std::shared_ptr<const MultiIndexLayout> layout)
    : layout_(std::move(layout)), coeffs_(layout_->size(), 0.0) {}

CoeffSeries CoeffSeries::constant(std::size_t dim, int degree, cplx value) {
  CoeffSeries s(dim, degree);
  s.coeffs_[0] = value;
  return s;
}

CoeffSeries CoeffSeries::monomial(std::size_t dim, int degree, std::span<const int> n, cplx value) {
  CoeffSeries s(dim, degree);
  long i = s.layout_->find(n);
  if (i < 0) throw std::invalid_argument("CoeffSeries::monomial: index beyond degree cap");
  s.coeffs_[i] = value;
  return s;
}

CoeffSeries CoeffSeries::from_coefficients(std::size_t dim, int degree,
                                           const std::function<cplx(std::span<const int>)>& f) {
  CoeffSeries s(dim, degree);
  for (std::size_t i = 0; i < s.size(); ++i) s.coeffs_[i] = f(s.layout_->index(i));
  return s;
}

void CoeffSeries::set_gauss_factor(cplx a, CoeffSeries core) {
  core.factor_.reset();
  core.tail_flag = 0.0;
  factor_ = GaussFactor{a, std::make_shared<const CoeffSeries>(std::move(core))};
}

cplx CoeffSeries::coeff(std::span<const int> n) const {
  long i = layout_->find(n);
  return i < 0 ? cplx(0.0) : coeffs_[i];
}

namespace {

void require_same(const CoeffSeries& a, const CoeffSeries& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("CoeffSeries: dimension mismatch");
}

}  // namespace

CoeffSeries& CoeffSeries::operator+=(const CoeffSeries& o) {
  require_same(*this, o);
  std::optional<GaussFactor> keep;
  if (factor_ && o.factor_ && factor_->a == o.factor_->a && degree() == o.degree() &&
      factor_->core->degree() == o.factor_->core->degree()) {
    CoeffSeries core = *factor_->core;
    core += *o.factor_->core;
    keep = GaussFactor{factor_->a, std::make_shared<const CoeffSeries>(std::move(core))};
  }
  factor_.reset();
  if (o.degree() > degree()) *this = resize_series(*this, o.degree());
  for (std::size_t i = 0; i < o.size(); ++i) {
    long j = o.layout_ == layout_ ? static_cast<long>(i) : layout_->find(o.layout_->index(i));
    coeffs_[j] += o.coeffs_[i];
  }
  tail_flag += o.tail_flag;
  factor_ = std::move(keep);
  return *this;
}

CoeffSeries& CoeffSeries::operator-=(const CoeffSeries& o) {
  require_same(*this, o);
  std::optional<GaussFactor> keep;
  if (factor_ && o.factor_ && factor_->a == o.factor_->a && degree() == o.degree() &&
      factor_->core->degree() == o.factor_->core->degree()) {
    CoeffSeries core = *factor_->core;
    core -= *o.factor_->core;
    keep = GaussFactor{factor_->a, std::make_shared<const CoeffSeries>(std::move(core))};
  }
  factor_.reset();
  if (o.degree() > degree()) *this = resize_series(*this, o.degree());
  for (std::size_t i = 0; i < o.size(); ++i) {
    long j = o.layout_ == layout_ ? static_cast<long>(i) : layout_->find(o.layout_->index(i));
    coeffs_[j] -= o.coeffs_[i];
  }
  tail_flag += o.tail_flag;
  factor_ = std::move(keep);
  return *this;
}

CoeffSeries& CoeffSeries::operator*=(cplx a) {
  for (auto& c : coeffs_) c *= a;
  tail_flag *= std::abs(a);
  if (factor_) {
    CoeffSeries core = *factor_->core;
    for (auto& c : core.coeffs_) c *= a;
    factor_->core = std::make_shared<const CoeffSeries>(std::move(core));
  }
  return *this;
}

CoeffSeries operator+(CoeffSeries a, const CoeffSeries& b) { return a += b; }
CoeffSeries operator-(CoeffSeries a, const CoeffSeries& b) { return a -= b; }
CoeffSeries operator*(cplx a, CoeffSeries s) { return s *= a; }

CoeffSeries resize_series(const CoeffSeries& s, int degree) {
  CoeffSeries out(s.dim(), degree);
  out.tail_flag = s.tail_flag;
  if (degree >= s.degree()) {
    // Graded ordering: the old layout is a prefix of the new one.
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i];
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s[i];
    for (std::size_t i = out.size(); i < s.size(); ++i) out.tail_flag += std::abs(s[i]);
  }
  // zero padding is not the truncation of exp(a z^2) core at the larger degree
  if (degree <= s.degree() && s.gauss_factor())
    out.set_gauss_factor(s.gauss_factor()->a, *s.gauss_factor()->core);
  return out;
}

double max_coeff_diff(const CoeffSeries& a, const CoeffSeries& b) {
  require_same(a, b);
  const CoeffSeries& big = a.degree() >= b.degree() ? a : b;
  const CoeffSeries& small = a.degree() >= b.degree() ? b : a;
  double m = 0.0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    cplx other = i < small.size() ? small[i] : cplx(0.0);
    m = std::max(m, std::abs(big[i] - other));
  }
  return m;
}

double max_coeff_abs(const CoeffSeries& s) {
  double m = 0.0;
  for (auto c : s.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

namespace {

template <class T>
cplx evaluate_impl(const CoeffSeries& s, std::span<const T> z) {
  if (z.size() != s.dim()) throw std::invalid_argument("evaluate: point dimension mismatch");
  const int D = s.degree();
  if (s.dim() == 1) {
    cplx acc = 0.0;
    for (int n = D; n >= 0; --n) acc = acc * z[0] + s[n];
    return acc;
  }
  std::vector<T> pw(s.dim() * (D + 1));
  for (std::size_t j = 0; j < s.dim(); ++j) {
    pw[j * (D + 1)] = 1.0;
    for (int n = 1; n <= D; ++n) pw[j * (D + 1) + n] = pw[j * (D + 1) + n - 1] * z[j];
  }
  cplx acc = 0.0;
  const auto& L = s.layout();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == cplx(0.0)) continue;
    auto n = L.index(i);
    T m = 1.0;
    for (std::size_t j = 0; j < s.dim(); ++j) m *= pw[j * (D + 1) + n[j]];
    acc += s[i] * m;
  }
  return acc;
}

}  // namespace

cplx evaluate(const CoeffSeries& s, std::span<const cplx> z) { return evaluate_impl<cplx>(s, z); }
cplx evaluate_real(const CoeffSeries& s, std::span<const double> x) {
  return evaluate_impl<double>(s, x);
}

namespace {

// exp(a z^2) s, formed at degree 2D and truncated back to D.
CoeffSeries gaussian_multiply_plain(const CoeffSeries& s, cplx a) {
  const int D = s.degree();
  const int W = 2 * D;
  CoeffSeries work = resize_series(s, W);
  const auto& L = work.layout();
  const std::size_t dim = s.dim();

  std::vector<cplx> g(W / 2 + 1);
  g[0] = 1.0;
  for (int m = 1; m <= W / 2; ++m) g[m] = g[m - 1] * a / static_cast<double>(m);

  std::vector<int> idx(dim);
  for (std::size_t axis = 0; axis < dim; ++axis) {
    std::vector<cplx> out(work.size(), 0.0);
    for (std::size_t i = 0; i < work.size(); ++i) {
      auto n = L.index(i);
      std::copy(n.begin(), n.end(), idx.begin());
      const int top = n[axis];
      cplx acc = 0.0;
      for (int m = 0; 2 * m <= top; ++m) {
        idx[axis] = top - 2 * m;
        acc += g[m] * work[L.find(idx)];
      }
      out[i] = acc;
    }
    work.coefficients() = std::move(out);
  }
  return resize_series(work, D);
}

}  // namespace

CoeffSeries gaussian_multiply(const CoeffSeries& s, cplx a) {
  if (a == cplx(0.0)) return s;
  const int D = s.degree();
  const auto* f = s.gauss_factor();
  // strip the factor from the plain part
  CoeffSeries plain = f ? *f->core : resize_series(s, D);
  if (!f) plain.tail_flag = 0.0;
  const cplx total = f ? f->a + a : a;
  CoeffSeries out = total == cplx(0.0) ? resize_series(plain, D)
                                       : resize_series(gaussian_multiply_plain(plain, total), D);
  out.tail_flag += s.tail_flag;
  if (total != cplx(0.0)) out.set_gauss_factor(total, std::move(plain));
  return out;
}

CoeffSeries dilate_series(const CoeffSeries& s, cplx lambda) {
  CoeffSeries out = s;
  if (lambda == cplx(1.0)) return out;
  std::vector<cplx> pw(s.degree() + 1);
  pw[0] = 1.0;
  for (int d = 1; d <= s.degree(); ++d) pw[d] = pw[d - 1] * lambda;
  auto& c = out.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= pw[s.layout().total_degree(i)];
  if (const auto* f = s.gauss_factor()) out.set_gauss_factor(f->a * lambda * lambda, dilate_series(*f->core, lambda));
  return out;
}

CoeffSeries g_map(const MultiplicitySetup& setup, const CoeffSeries& s) {
  CoeffSeries out = gaussian_multiply(dilate_series(s, 2.0), 1.0 / setup.t());
  out *= std::pow(2.0, homogeneity(setup) / 2.0);
  return out;
}

CoeffSeries g_inverse(const MultiplicitySetup& setup, const CoeffSeries& s) {
  CoeffSeries out = gaussian_multiply(dilate_series(s, 0.5), -1.0 / (4.0 * setup.t()));
  out *= std::pow(2.0, -homogeneity(setup) / 2.0);
  return out;
}

}  // namespace dunklsb
