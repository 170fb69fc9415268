#include "chernlab/geometry.hpp"

#include <stdexcept>

#include "chernlab/errors.hpp"

namespace chernlab {

using tensor::FormField;

namespace {

constexpr std::size_t kPowerBase = 0;  // omega^k at slot k
constexpr std::size_t kDerivedBase = constants::kMaxDimension + 1;

cplx value(const Expression& e, std::span<const cplx> p) { return e.is_literal() ? e.value() : expr::eval(e, p); }

int local_to_jet(int slot, int n) { return slot < n ? Jet::holo(slot) : Jet::anti(slot - n); }

expr::Wirtinger kind_of(int slot, int n) {
  return slot < n ? expr::Wirtinger::Holomorphic : expr::Wirtinger::Antiholomorphic;
}

int coord_of(int slot, int n) { return (slot < n ? slot : slot - n) + 1; }

double real_diagonal(cplx v, int i) {
  if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v)))
    throw SingularMetric("diagonal metric entry " + std::to_string(i + 1) + " is not real");
  return v.real();
}

}  // namespace

Geometry::Geometry(ManifoldSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const int n = spec_.n;
  entries_.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries_[static_cast<std::size_t>(i * n + j)] = spec_.entry(i, j);
}

const std::vector<Geometry::Derivatives>& Geometry::derivatives() const {
  std::call_once(deriv_once_, [this] {
    const int n = spec_.n;
    const int slots = 2 * n;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const Expression& e = spec_.upper_entry(i, j);
        Derivatives d;
        d.d.resize(static_cast<std::size_t>(slots));
        d.dd.resize(static_cast<std::size_t>(slots * (slots + 1) / 2));
        for (int a = 0; a < slots; ++a) d.d[static_cast<std::size_t>(a)] = expr::wirtinger_d(e, coord_of(a, n), kind_of(a, n));
        for (int b = 0; b < slots; ++b)
          for (int a = 0; a <= b; ++a)
            d.dd[static_cast<std::size_t>(b * (b + 1) / 2 + a)] =
                expr::wirtinger_d(d.d[static_cast<std::size_t>(a)], coord_of(b, n), kind_of(b, n));
        derivs_.push_back(std::move(d));
      }
    }
    std::vector<Expression> outputs;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++idx) {
        outputs.push_back(spec_.upper_entry(i, j));
        outputs.insert(outputs.end(), derivs_[idx].d.begin(), derivs_[idx].d.end());
        outputs.insert(outputs.end(), derivs_[idx].dd.begin(), derivs_[idx].dd.end());
      }
    jet_program_.emplace(outputs);
  });
  return derivs_;
}

CMatrix Geometry::metric(std::span<const cplx> p) const {
  const int n = spec_.n;
  CMatrix h(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx v = value(spec_.upper_entry(i, j), p);
      if (i == j) {
        h(i, i) = real_diagonal(v, i);
      } else {
        h(i, j) = v;
        h(j, i) = std::conj(v);
      }
    }
  }
  return h;
}

Matrix<Jet> Geometry::metric_jet(std::span<const cplx> p) const {
  const int n = spec_.n;
  const int slots = 2 * n;
  derivatives();
  std::vector<cplx> v;
  jet_program_->run(p, v);
  Matrix<Jet> h(n);
  std::size_t at = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Jet x(v[at++]);
      for (int a = 0; a < slots; ++a) x.set_d(local_to_jet(a, n), v[at++]);
      for (int b = 0; b < slots; ++b)
        for (int a = 0; a <= b; ++a) x.set_dd(local_to_jet(a, n), local_to_jet(b, n), v[at++]);
      if (i == j) {
        real_diagonal(x.value(), i);
        h(i, i) = (x + conj(x)) * cplx(0.5);
      } else {
        h(i, j) = x;
        h(j, i) = conj(x);
      }
    }
  }
  return h;
}

template <class F>
const FormField& Geometry::lazy(std::size_t slot, F&& build) const {
  std::call_once(field_once_[slot], [&] { fields_[slot].emplace(build()); });
  return *fields_[slot];
}

const FormField& Geometry::omega_power(int k) const {
  const int n = spec_.n;
  if (k < 0 || k > n) throw std::invalid_argument("omega power out of range");
  return lazy(kPowerBase + static_cast<std::size_t>(k), [this, k, n] {
    if (k == 0) return tensor::unit_form<Expression>(n);
    if (k == 1) {
      FormField w(n, 1, 1);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w.at(tensor::Mask{1} << i, tensor::Mask{1} << j) = entry(i, j);
      return w;
    }
    return tensor::wedge(omega_power(k - 1), omega());
  });
}

const FormField& Geometry::omega() const { return omega_power(1); }

const FormField& Geometry::del_omega() const {
  return lazy(kDerivedBase + 0, [this] { return tensor::partial(omega()); });
}

const FormField& Geometry::del_omega_top() const {
  return lazy(kDerivedBase + 1, [this] { return tensor::partial(omega_power(spec_.n - 1)); });
}

const FormField& Geometry::delbar_omega_top() const {
  return lazy(kDerivedBase + 2, [this] { return tensor::partial_bar(omega_power(spec_.n - 1)); });
}

const FormField& Geometry::ddbar_omega_top() const {
  return lazy(kDerivedBase + 3, [this] { return tensor::partial(delbar_omega_top()); });
}

const FormField& Geometry::ddbar_omega_sub() const {
  if (spec_.n < 2) throw std::invalid_argument("omega^{n-2} needs n >= 2");
  return lazy(kDerivedBase + 4, [this] { return tensor::partial(tensor::partial_bar(omega_power(spec_.n - 2))); });
}

PointGeometry::PointGeometry(const Geometry& g, std::span<const cplx> p, double tol)
    : g_(&g), p_(p.begin(), p.end()) {
  if (static_cast<int>(p_.size()) != g.dim()) throw std::invalid_argument("point has the wrong dimension");
  const int n = g.dim();
  jet_ = g.metric_jet(p_);
  h_ = CMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h_(i, j) = jet_(i, j).value();
  pivoted_cholesky(h_, tol);
  inv_ = chernlab::inverse(h_);
}

const tensor::FormMetric<Jet>& PointGeometry::jet_metric() const {
  std::call_once(jm_once_, [this] { jm_.emplace(jet_); });
  return *jm_;
}

}  // namespace chernlab
