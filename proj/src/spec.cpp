#include "chernlab/spec.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "chernlab/errors.hpp"
#include "chernlab/json_text.hpp"

namespace chernlab {

double Domain::lebesgue_volume(int n) const {
  switch (kind) {
    case DomainKind::Annulus: {
      // Shell r_min < |z| <= r_max in R^{2n}: unit-ball volume pi^n / n!.
      double ball = 1.0;
      for (int k = 1; k <= n; ++k) ball *= std::numbers::pi / k;
      return ball * (std::pow(r_max, 2 * n) - std::pow(r_min, 2 * n));
    }
    case DomainKind::Box: {
      double v = 1.0;
      for (const auto& r : rectangles) v *= (r[1] - r[0]) * (r[3] - r[2]);
      return v;
    }
    case DomainKind::Torus: {
      double v = 1.0;
      for (double p : periods) v *= std::abs(p);
      return v;
    }
  }
  return 0.0;
}

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Annulus:
      return "annulus";
    case DomainKind::Box:
      return "box";
    case DomainKind::Torus:
      return "torus";
  }
  return "?";
}

namespace {

std::size_t upper_slot(int n, int i, int j) {
  // Row i starts after rows 0..i-1, which hold n, n-1, ... entries.
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

}  // namespace

Expression ManifoldSpec::entry(int i, int j) const {
  if (i <= j) return upper_entry(i, j);
  return conj(upper_entry(j, i));
}

Expression& ManifoldSpec::upper_entry(int i, int j) { return upper.at(upper_slot(n, i, j)); }
const Expression& ManifoldSpec::upper_entry(int i, int j) const { return upper.at(upper_slot(n, i, j)); }

ManifoldSpec ManifoldSpec::flat(int n) {
  ManifoldSpec s;
  s.name = "flat";
  s.n = n;
  s.upper.assign(static_cast<std::size_t>(n * (n + 1) / 2), Expression());
  for (int i = 0; i < n; ++i) s.upper_entry(i, i) = Expression::literal(1.0);
  s.domain.kind = DomainKind::Torus;
  s.domain.periods.assign(static_cast<std::size_t>(2 * n), 1.0);
  return s;
}

void ManifoldSpec::validate() const {
  if (n < 1) throw ParseError("dimension must be at least 1");
  if (n > constants::kMaxDimension)
    throw ParseError("dimension " + std::to_string(n) + " exceeds the supported maximum " +
                     std::to_string(constants::kMaxDimension));
  if (upper.size() != static_cast<std::size_t>(n * (n + 1) / 2)) throw ParseError("metric table has the wrong size");
  for (const auto& e : upper)
    if (e.max_index() > n) throw ParseError("coordinate index out of range in metric entry");
  switch (domain.kind) {
    case DomainKind::Annulus:
      if (!(domain.r_min > 0.0) || !(domain.r_min < domain.r_max) || !std::isfinite(domain.r_max))
        throw ParseError("annulus requires 0 < r_min < r_max");
      break;
    case DomainKind::Box:
      if (domain.rectangles.size() != static_cast<std::size_t>(n))
        throw ParseError("box domain needs one rectangle per coordinate");
      for (const auto& r : domain.rectangles)
        if (!(r[0] < r[1]) || !(r[2] < r[3])) throw ParseError("box rectangle must have positive extent");
      break;
    case DomainKind::Torus:
      if (domain.periods.size() != static_cast<std::size_t>(2 * n))
        throw ParseError("torus domain needs 2n periods");
      for (double p : domain.periods)
        if (p == 0.0 || !std::isfinite(p)) throw ParseError("torus periods must be nonzero");
      break;
  }
  for (const auto& g : generators) {
    if (g.size() != n) throw ParseError("generator has the wrong size");
    if (std::abs(determinant(g)) == 0.0) throw ParseError("generator is not invertible");
  }
}

namespace {

class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  /// Position of the first occurrence of `"key"` as an object key, or the document start.
  std::size_t key(const std::string& k) const {
    const std::string needle = "\"" + k + "\"";
    const auto at = text_.find(needle);
    return at == std::string_view::npos ? 0 : at;
  }

  /// Byte offset of the first character inside the string value following key `k`.
  std::size_t value_string(const std::string& k) const {
    std::size_t at = key(k);
    if (at == 0 && text_.substr(0, k.size() + 2) != "\"" + k + "\"") return std::string_view::npos;
    at = text_.find(':', at + k.size() + 2);
    if (at == std::string_view::npos) return at;
    at = text_.find('"', at);
    return at == std::string_view::npos ? at : at + 1;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    const auto [line, col] = line_column(text_, offset);
    throw ParseError(what, line, col);
  }

  [[noreturn]] void fail_at_key(const std::string& what, const std::string& k) const {
    const auto pos = text_.find("\"" + k + "\"");
    if (pos == std::string_view::npos) throw ParseError(what);
    fail(what, pos);
  }

 private:
  std::string_view text_;
};

double number(const Json& v, const std::string& what, const Locator& loc, const std::string& key) {
  if (!v.is_number()) loc.fail_at_key(what + " must be a number", key);
  return v.get<double>();
}

cplx complex_entry(const Json& v, const Locator& loc) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  loc.fail_at_key("generator entries must be numbers or [re, im] pairs", "generators");
}

CMatrix parse_generator(const Json& g, int n, const Locator& loc) {
  CMatrix m(n);
  if (!g.is_array()) loc.fail_at_key("generator must be an array", "generators");
  const auto nn = static_cast<std::size_t>(n);
  auto is_scalar = [](const Json& v) {
    return v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number());
  };
  bool flat = g.size() == nn * nn;
  for (const auto& v : g) flat = flat && is_scalar(v);
  if (flat) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = complex_entry(g[static_cast<std::size_t>(i * n + j)], loc);
    return m;
  }
  if (g.size() != nn) loc.fail_at_key("generator must be an n x n matrix", "generators");
  for (std::size_t i = 0; i < nn; ++i) {
    if (!g[i].is_array() || g[i].size() != nn) loc.fail_at_key("generator rows must have n entries", "generators");
    for (std::size_t j = 0; j < nn; ++j) m(static_cast<int>(i), static_cast<int>(j)) = complex_entry(g[i][j], loc);
  }
  return m;
}

/// Numeric equality of two expressions at a few deterministic points; points
/// where either side is singular are skipped.
bool numerically_equal(const Expression& a, const Expression& b, int n) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g(0.0, 0.7);
  int compared = 0;
  for (int trial = 0; trial < 16 && compared < 6; ++trial) {
    std::vector<cplx> p(static_cast<std::size_t>(n));
    for (auto& z : p) z = cplx(g(rng), g(rng));
    try {
      const cplx x = expr::eval(a, p), y = expr::eval(b, p);
      if (std::abs(x - y) > 1e-9 * (1.0 + std::abs(x) + std::abs(y))) return false;
      ++compared;
    } catch (const ChartSingularity&) {
    }
  }
  return compared > 0;
}

}  // namespace

ManifoldSpec parse_metric_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_column(text, offset);
    std::string what = e.what();
    const auto cut = what.find("syntax error");
    throw ParseError(cut == std::string::npos ? "malformed JSON" : what.substr(cut), line, col);
  }
  const Locator loc(text);
  if (!doc.is_object()) throw ParseError("spec document must be a JSON object", 1, 1);

  ManifoldSpec spec;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) loc.fail_at_key("name must be a string", "name");
    spec.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("dimension")) throw ParseError("missing dimension");
  if (!doc["dimension"].is_number_integer()) loc.fail_at_key("dimension must be an integer", "dimension");
  spec.n = doc["dimension"].get<int>();
  if (spec.n < 1 || spec.n > constants::kMaxDimension)
    loc.fail_at_key("dimension must lie in 1.." + std::to_string(constants::kMaxDimension), "dimension");
  const int n = spec.n;

  if (!doc.contains("metric") || !doc["metric"].is_object()) throw ParseError("missing metric table");
  std::map<std::pair<int, int>, Expression> upper, lower;
  for (auto it = doc["metric"].begin(); it != doc["metric"].end(); ++it) {
    const std::string& key = it.key();
    int i = 0, j = 0;
    char comma = 0;
    std::istringstream ks(key);
    if (!(ks >> i >> comma >> j) || comma != ',' || !(ks >> std::ws).eof())
      loc.fail_at_key("metric key \"" + key + "\" is not of the form \"i,j\"", key);
    if (i < 1 || j < 1 || i > n || j > n) loc.fail_at_key("metric index out of range in \"" + key + "\"", key);
    if (!it.value().is_string()) loc.fail_at_key("metric entry \"" + key + "\" must be a string", key);
    Expression e;
    try {
      e = expr::parse_expression(it.value().get<std::string>(), n);
    } catch (const ParseError& err) {
      const std::size_t start = loc.value_string(key);
      std::string what = err.what();
      const auto colon = what.find(": ");
      if (colon != std::string::npos && err.line() > 0) what = what.substr(colon + 2);
      what = "metric entry \"" + key + "\": " + what;
      if (start == std::string_view::npos) throw ParseError(what);
      loc.fail(what, start + static_cast<std::size_t>(std::max(0, err.column() - 1)));
    }
    auto& table = i <= j ? upper : lower;
    if (i > j) std::swap(i, j);
    if (table.count({i, j})) loc.fail_at_key("duplicate metric entry \"" + key + "\"", key);
    table[{i, j}] = e;
  }
  for (const auto& [ij, e] : lower) {
    const Expression c = conj(e);
    auto found = upper.find(ij);
    if (found == upper.end()) {
      upper[ij] = c;
      continue;
    }
    if (!structurally_equal(found->second, c) && !numerically_equal(found->second, c, n)) {
      const std::string k = std::to_string(ij.second) + "," + std::to_string(ij.first);
      loc.fail_at_key("non-Hermitian duplicate entry: \"" + k + "\" is not the conjugate of \"" +
                          std::to_string(ij.first) + "," + std::to_string(ij.second) + "\"",
                      k);
    }
  }
  spec.upper.assign(static_cast<std::size_t>(n * (n + 1) / 2), Expression());
  for (int i = 1; i <= n; ++i) {
    if (!upper.count({i, i})) throw ParseError("missing diagonal metric entry \"" + std::to_string(i) + "," + std::to_string(i) + "\"");
  }
  for (const auto& [ij, e] : upper) spec.upper_entry(ij.first - 1, ij.second - 1) = e;

  if (!doc.contains("domain") || !doc["domain"].is_object()) throw ParseError("missing domain");
  const Json& d = doc["domain"];
  if (!d.contains("type") || !d["type"].is_string()) loc.fail_at_key("domain needs a type", "domain");
  const std::string type = d["type"].get<std::string>();
  if (type == "annulus") {
    spec.domain.kind = DomainKind::Annulus;
    if (!d.contains("r_min") || !d.contains("r_max")) loc.fail_at_key("annulus needs r_min and r_max", "domain");
    spec.domain.r_min = number(d["r_min"], "r_min", loc, "r_min");
    spec.domain.r_max = number(d["r_max"], "r_max", loc, "r_max");
    if (!(spec.domain.r_min > 0.0) || !(spec.domain.r_min < spec.domain.r_max))
      loc.fail_at_key("annulus requires 0 < r_min < r_max", "r_min");
  } else if (type == "box") {
    spec.domain.kind = DomainKind::Box;
    if (!d.contains("rectangles") || !d["rectangles"].is_array() || d["rectangles"].size() != static_cast<std::size_t>(n))
      loc.fail_at_key("box needs one rectangle per coordinate", "domain");
    for (const auto& r : d["rectangles"]) {
      if (!r.is_array() || r.size() != 4) loc.fail_at_key("rectangle must be [re_lo, re_hi, im_lo, im_hi]", "rectangles");
      std::array<double, 4> b{};
      for (std::size_t k = 0; k < 4; ++k) b[k] = number(r[k], "rectangle bound", loc, "rectangles");
      if (!(b[0] < b[1]) || !(b[2] < b[3])) loc.fail_at_key("rectangle must have positive extent", "rectangles");
      spec.domain.rectangles.push_back(b);
    }
  } else if (type == "torus") {
    spec.domain.kind = DomainKind::Torus;
    if (!d.contains("periods") || !d["periods"].is_array() || d["periods"].size() != static_cast<std::size_t>(2 * n))
      loc.fail_at_key("torus needs 2n periods", "domain");
    for (const auto& p : d["periods"]) {
      const double v = number(p, "period", loc, "periods");
      if (v == 0.0) loc.fail_at_key("torus periods must be nonzero", "periods");
      spec.domain.periods.push_back(v);
    }
  } else {
    loc.fail_at_key("unknown domain type \"" + type + "\"", "type");
  }

  if (doc.contains("generators")) {
    if (!doc["generators"].is_array()) loc.fail_at_key("generators must be an array", "generators");
    for (const auto& g : doc["generators"]) spec.generators.push_back(parse_generator(g, n, loc));
  }
  spec.validate();
  return spec;
}

std::string to_json(const ManifoldSpec& spec) {
  Json doc;
  doc["name"] = spec.name;
  doc["dimension"] = spec.n;
  Json metric = Json::object();
  for (int i = 0; i < spec.n; ++i)
    for (int j = i; j < spec.n; ++j) {
      const Expression& e = spec.upper_entry(i, j);
      if (i != j && e.is_zero()) continue;
      metric[std::to_string(i + 1) + "," + std::to_string(j + 1)] = expr::to_string(e);
    }
  doc["metric"] = metric;
  Json d;
  d["type"] = to_string(spec.domain.kind);
  switch (spec.domain.kind) {
    case DomainKind::Annulus:
      d["r_min"] = spec.domain.r_min;
      d["r_max"] = spec.domain.r_max;
      break;
    case DomainKind::Box: {
      Json rs = Json::array();
      for (const auto& r : spec.domain.rectangles) rs.push_back(Json::array({r[0], r[1], r[2], r[3]}));
      d["rectangles"] = rs;
      break;
    }
    case DomainKind::Torus:
      d["periods"] = spec.domain.periods;
      break;
  }
  doc["domain"] = d;
  if (!spec.generators.empty()) {
    Json gs = Json::array();
    for (const auto& g : spec.generators) {
      Json m = Json::array();
      for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) m.push_back(Json::array({g(i, j).real(), g(i, j).imag()}));
      gs.push_back(m);
    }
    doc["generators"] = gs;
  }
  return dump_json(doc);
}

}  // namespace chernlab
