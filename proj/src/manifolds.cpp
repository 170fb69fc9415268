#include "chernlab/manifolds.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "chernlab/errors.hpp"
#include "chernlab/parallel.hpp"

namespace chernlab::manifolds {

namespace {

constexpr const char* kDefaultConformalFactor =
    "0.1*(exp(pi*i*(z1+conj(z1)))+exp(-pi*i*(z1+conj(z1))))";

ManifoldSpec diagonal_spec(const std::string& name, int n, const Expression& d) {
  ManifoldSpec s = ManifoldSpec::flat(n);
  s.name = name;
  for (int i = 0; i < n; ++i) s.upper_entry(i, i) = d;
  return s;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"hopf_boothby", "flat_torus", "iwasawa", "conformal_torus"};
  return names;
}

ManifoldSpec builtin(const std::string& name, const BuiltinParams& params) {
  const int n = params.n;
  if (n < 1 || n > constants::kMaxDimension)
    throw std::invalid_argument("dimension must lie in 1.." + std::to_string(constants::kMaxDimension));
  if (name == "hopf_boothby") {
    if (!(params.rho0 > 0.0 && params.rho0 < 1.0)) throw std::invalid_argument("hopf_boothby needs 0 < rho0 < 1");
    if (!params.lambda.empty() && params.lambda.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("hopf_boothby needs n rotation angles");
    ManifoldSpec s = diagonal_spec(name, n, Expression::literal(4.0) / Expression::nsq());
    s.domain = Domain{};
    s.domain.kind = DomainKind::Annulus;
    s.domain.r_min = params.rho0;
    s.domain.r_max = 1.0;
    CMatrix g(n);
    for (int k = 0; k < n; ++k) {
      const double lam = params.lambda.empty() ? 0.0 : params.lambda[static_cast<std::size_t>(k)];
      g(k, k) = params.rho0 * std::exp(cplx(0.0, 2.0 * std::numbers::pi * lam));
    }
    s.generators.push_back(g);
    return s;
  }
  if (name == "flat_torus") {
    ManifoldSpec s = ManifoldSpec::flat(n);
    s.name = name;
    return s;
  }
  if (name == "iwasawa") {
    if (n != 3) throw std::invalid_argument("iwasawa requires n = 3");
    ManifoldSpec s = ManifoldSpec::flat(3);
    s.name = name;
    // phi_3 = dz3 - z1 dz2, omega = sum phi_a ^ conj(phi_a).
    s.upper_entry(1, 1) = expr::parse_expression("1 + z1*conj(z1)", 3);
    s.upper_entry(1, 2) = expr::parse_expression("-z1", 3);
    s.domain = Domain{};
    s.domain.kind = DomainKind::Box;
    s.domain.rectangles.assign(3, {0.0, 1.0, 0.0, 1.0});
    return s;
  }
  if (name == "conformal_torus") {
    const Expression u = expr::parse_expression(params.u.empty() ? kDefaultConformalFactor : params.u, n);
    if (!expr::is_real_valued(u, n)) throw std::invalid_argument("conformal factor must be real-valued");
    ManifoldSpec s = diagonal_spec(name, n, exp(u));
    return s;
  }
  throw std::invalid_argument("unknown builtin \"" + name + "\"");
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

InvarianceResult group_invariance(const ManifoldSpec& spec, int samples, std::uint64_t seed) {
  InvarianceResult r;
  if (spec.generators.empty()) return r;
  const Geometry g(spec);
  const int n = spec.n;
  for (const Point& p : sample_domain(spec.domain, n, samples, seed)) {
    CMatrix hp;
    try {
      hp = g.metric(p);
    } catch (const ChartSingularity&) {
      ++r.resampled;
      continue;
    }
    for (const CMatrix& a : spec.generators) {
      Point q(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(i)] += a(i, j) * p[static_cast<std::size_t>(j)];
      CMatrix hq;
      try {
        hq = g.metric(q);
      } catch (const ChartSingularity&) {
        ++r.resampled;
        continue;
      }
      CMatrix pulled(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cplx s = 0.0;
          for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) s += a(x, i) * hq(x, y) * std::conj(a(y, j));
          pulled(i, j) = s - hp(i, j);
        }
      r.residual = std::max(r.residual, frobenius_norm(pulled));
      ++r.checked;
    }
  }
  return r;
}

double group_invariance_check(const ManifoldSpec& spec, int samples, std::uint64_t seed) {
  return group_invariance(spec, samples, seed).residual;
}

SampleSet sample_weighted(const Domain& domain, int n, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sample count must be non-negative");
  const double volume = domain.lebesgue_volume(n);
  if (!(volume > 0.0)) throw std::invalid_argument("empty domain");
  SampleSet s;
  s.points.reserve(static_cast<std::size_t>(count));
  s.weights.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  for (int c = 0; c < count; ++c) {
    Point p(static_cast<std::size_t>(n));
    double w = volume;
    switch (domain.kind) {
      case DomainKind::Annulus: {
        double norm2 = 0.0;
        std::vector<double> g(static_cast<std::size_t>(2 * n));
        do {
          norm2 = 0.0;
          for (double& x : g) {
            x = rng.normal();
            norm2 += x * x;
          }
        } while (norm2 < 1e-300);
        const double ratio = std::log(domain.r_max / domain.r_min);
        const double r = domain.r_min * std::exp(ratio * (1.0 - rng.uniform()));  // (r_min, r_max]
        const double scale = r / std::sqrt(norm2);
        for (int k = 0; k < n; ++k)
          p[static_cast<std::size_t>(k)] = cplx(g[static_cast<std::size_t>(2 * k)], g[static_cast<std::size_t>(2 * k + 1)]) * scale;
        double sphere = 2.0 * std::pow(std::numbers::pi, n);  // area of S^{2n-1}
        for (int k = 2; k < n; ++k) sphere /= k;
        w = sphere * std::pow(r, 2 * n) * ratio;
        break;
      }
      case DomainKind::Box:
        for (int k = 0; k < n; ++k) {
          const auto& b = domain.rectangles[static_cast<std::size_t>(k)];
          const double x = b[0] + (b[1] - b[0]) * rng.uniform();
          const double y = b[2] + (b[3] - b[2]) * rng.uniform();
          p[static_cast<std::size_t>(k)] = cplx(x, y);
        }
        break;
      case DomainKind::Torus:
        for (int k = 0; k < n; ++k) {
          const double x = domain.periods[static_cast<std::size_t>(2 * k)] * rng.uniform();
          const double y = domain.periods[static_cast<std::size_t>(2 * k + 1)] * rng.uniform();
          p[static_cast<std::size_t>(k)] = cplx(x, y);
        }
        break;
    }
    s.points.push_back(std::move(p));
    s.weights.push_back(w);
  }
  return s;
}

std::vector<Point> sample_domain(const Domain& domain, int n, int count, std::uint64_t seed) {
  return sample_weighted(domain, n, count, seed).points;
}

namespace {

/// Evaluates f * det h at every point; nullopt marks a singular point.
std::vector<std::optional<std::vector<double>>> evaluate_all(const VectorField& field, const Geometry& g,
                                                             const std::vector<Point>& points) {
  std::vector<std::optional<std::vector<double>>> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      const PointGeometry pg(g, points[i]);
      std::vector<double> v = field(pg);
      const double det = determinant(pg.metric()).real();
      for (double& x : v) x *= det;
      out[i] = std::move(v);
    } catch (const ChartSingularity&) {
    } catch (const SingularMetric&) {
    }
  });
  return out;
}

std::size_t component_count(const std::vector<std::optional<std::vector<double>>>& values) {
  for (const auto& v : values)
    if (v) return v->size();
  return 0;
}

}  // namespace

std::vector<Integral> integrate(const VectorField& field, const Geometry& g, int count, std::uint64_t seed,
                                double precision) {
  if (count < 2) throw std::invalid_argument("Monte Carlo integration needs at least 2 points");
  const SampleSet s = sample_weighted(g.spec().domain, g.dim(), count, seed);
  const auto values = evaluate_all(field, g, s.points);
  const std::size_t m = component_count(values);
  if (m == 0) throw QuadratureError("every sample point is singular");
  std::vector<Integral> out(m);
  int rejected = 0;
  for (const auto& v : values) rejected += v ? 0 : 1;
  const auto N = static_cast<double>(count);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> x(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i]) continue;
      if (values[i]->size() != m) throw QuadratureError("field returned a varying number of components");
      x[i] = (*values[i])[c] * s.weights[i];
      if (!std::isfinite(x[i])) throw QuadratureError("non-finite field value at sample " + std::to_string(i));
    }
    const double mean = pairwise_sum(x) / N;
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - mean) * (x[i] - mean);
    const double var = pairwise_sum(dev) / (N - 1.0);
    Integral& r = out[c];
    r.value = mean;
    r.standard_error = std::sqrt(var / N);
    r.points = count;
    r.rejected = rejected;
    r.method = "monte-carlo";
    if (r.standard_error > precision)
      throw QuadratureError("standard error " + std::to_string(r.standard_error) + " exceeds requested precision");
  }
  return out;
}

Integral integrate(const Field& field, const Geometry& g, int count, std::uint64_t seed, double precision) {
  return integrate([&](const PointGeometry& pg) { return std::vector<double>{field(pg)}; }, g, count, seed,
                   precision)[0];
}

std::vector<Integral> integrate_grid(const VectorField& field, const Geometry& g, int resolution) {
  const Domain& d = g.spec().domain;
  const int n = g.dim();
  if (d.kind == DomainKind::Annulus) throw std::invalid_argument("grid quadrature needs a torus or box domain");
  if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
  std::vector<double> lo(static_cast<std::size_t>(2 * n)), len(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < 2; ++a) {
      const auto axis = static_cast<std::size_t>(2 * k + a);
      if (d.kind == DomainKind::Torus) {
        lo[axis] = std::min(0.0, d.periods[axis]);
        len[axis] = std::abs(d.periods[axis]);
      } else {
        const auto& r = d.rectangles[static_cast<std::size_t>(k)];
        lo[axis] = a == 0 ? r[0] : r[2];
        len[axis] = a == 0 ? r[1] - r[0] : r[3] - r[2];
      }
    }
  }
  auto quadrature = [&](int m) {
    std::size_t total = 1;
    for (int a = 0; a < 2 * n; ++a) total *= static_cast<std::size_t>(m);
    std::vector<Point> pts(total, Point(static_cast<std::size_t>(n)));
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int a = 0; a < 2 * n; ++a) {
        const auto i = rest % static_cast<std::size_t>(m);
        rest /= static_cast<std::size_t>(m);
        const double x = lo[static_cast<std::size_t>(a)] + (static_cast<double>(i) + 0.5) * len[static_cast<std::size_t>(a)] / m;
        auto& z = pts[idx][static_cast<std::size_t>(a / 2)];
        z = a % 2 ? cplx(z.real(), x) : cplx(x, z.imag());
      }
    }
    const auto values = evaluate_all(field, g, pts);
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!values[i]) throw QuadratureError("singular metric at grid point " + std::to_string(i));
    const std::size_t mc = component_count(values);
    double cell = 1.0;
    for (double l : len) cell *= l / m;
    std::vector<double> q(mc);
    for (std::size_t c = 0; c < mc; ++c) {
      std::vector<double> x(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        x[i] = (*values[i])[c];
        if (!std::isfinite(x[i])) throw QuadratureError("non-finite field value at grid point " + std::to_string(i));
      }
      q[c] = pairwise_sum(x) * cell;
    }
    return std::make_pair(q, total);
  };
  const auto [coarse, n1] = quadrature(resolution);
  const auto [fine, n2] = quadrature(2 * resolution);
  std::vector<Integral> out(fine.size());
  for (std::size_t c = 0; c < fine.size(); ++c) {
    out[c].value = (4.0 * fine[c] - coarse[c]) / 3.0;
    out[c].standard_error = std::abs(fine[c] - coarse[c]);
    out[c].points = static_cast<int>(n1 + n2);
    out[c].method = "grid";
  }
  return out;
}

}  // namespace chernlab::manifolds
