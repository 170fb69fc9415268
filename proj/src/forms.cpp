#include "chernlab/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace chernlab::tensor {

namespace {

struct SubsetTable {
  static constexpr int kN = constants::kMaxDimension;
  std::array<std::array<std::vector<Mask>, kN + 2>, kN + 1> lists;
  std::array<std::array<std::size_t, std::size_t{1} << kN>, kN + 1> rank{};

  SubsetTable() {
    for (int n = 1; n <= kN; ++n) {
      for (int p = 0; p <= n; ++p) {
        auto& list = lists[static_cast<std::size_t>(n)][static_cast<std::size_t>(p)];
        for (Mask m = 0; m < (Mask{1} << n); ++m)
          if (popcount(m) == p) list.push_back(m);
        // Lexicographic order of index lists = order by reversed bit pattern.
        std::sort(list.begin(), list.end(), [](Mask a, Mask b) { return indices(a) < indices(b); });
        for (std::size_t r = 0; r < list.size(); ++r) rank[static_cast<std::size_t>(n)][list[r]] = r;
      }
    }
  }
};

const SubsetTable& table() {
  static const SubsetTable t;
  return t;
}

const std::vector<Mask> kEmpty;

}  // namespace

std::vector<int> indices(Mask m) {
  std::vector<int> r;
  for (; m; m &= m - 1) r.push_back(__builtin_ctz(m));
  return r;
}

const std::vector<Mask>& subsets(int n, int p) {
  if (n < 1 || n > constants::kMaxDimension || p < 0 || p > n) return kEmpty;
  return table().lists[static_cast<std::size_t>(n)][static_cast<std::size_t>(p)];
}

std::size_t subset_rank(int n, Mask m) { return table().rank[static_cast<std::size_t>(n)][m]; }

FormField partial(const FormField& f) {
  return partial(f, [](const Expression& c, int k) { return expr::wirtinger_d(c, k + 1, expr::Wirtinger::Holomorphic); });
}

FormField partial_bar(const FormField& f) {
  return partial_bar(
      f, [](const Expression& c, int k) { return expr::wirtinger_d(c, k + 1, expr::Wirtinger::Antiholomorphic); });
}

JetForm partial(const JetForm& f) {
  return partial(f, [](const Jet& c, int k) { return c.derivative(Jet::holo(k)); });
}

JetForm partial_bar(const JetForm& f) {
  return partial_bar(f, [](const Jet& c, int k) { return c.derivative(Jet::anti(k)); });
}

FormValue evaluate(const FormField& f, std::span<const cplx> point) {
  FormValue r(f.dim(), f.p(), f.q());
  for (std::size_t a = 0; a < f.size(); ++a) r[a] = f[a].is_literal() ? f[a].value() : expr::eval(f[a], point);
  return r;
}

FormValue values(const JetForm& f) {
  FormValue r(f.dim(), f.p(), f.q());
  for (std::size_t a = 0; a < f.size(); ++a) r[a] = f[a].value();
  return r;
}

std::pair<FormValue, FormValue> exterior_d_split(const FormField& f, std::span<const cplx> point) {
  return {evaluate(partial(f), point), evaluate(partial_bar(f), point)};
}

double norm(const FormValue& f) {
  double s = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a) s += std::norm(f[a]);
  return std::sqrt(s);
}

double max_abs(const FormValue& f) {
  double m = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a) m = std::max(m, std::abs(f[a]));
  return m;
}

FormValue hodge_star(const FormValue& a, const CMatrix& h) {
  pivoted_cholesky(h);
  return hodge_star(a, FormMetric<cplx>(h));
}

cplx inner_product(const FormValue& a, const FormValue& b, const CMatrix& h) {
  pivoted_cholesky(h);
  return inner_product(a, b, FormMetric<cplx>(h));
}

FormValue volume_form(const CMatrix& h) {
  const int n = h.size();
  const Mask full = (Mask{1} << n) - 1;
  return monomial(n, full, full, FormMetric<cplx>(h).volume_coefficient());
}

}  // namespace chernlab::tensor
