#include "chernlab/expr.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "chernlab/errors.hpp"

namespace chernlab::expr {

namespace {

std::shared_ptr<const Node> leaf(Kind kind, int index = 0, cplx value = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->index = index;
  n->value = value;
  return n;
}

const std::shared_ptr<const Node>& zero_node() {
  static const std::shared_ptr<const Node> z = leaf(Kind::Literal);
  return z;
}

cplx ipow(cplx base, int k) {
  bool invert = k < 0;
  unsigned e = invert ? static_cast<unsigned>(-static_cast<long>(k)) : static_cast<unsigned>(k);
  cplx result(1.0);
  cplx b = base;
  while (e != 0) {
    if (e & 1U) result *= b;
    b *= b;
    e >>= 1U;
  }
  return invert ? cplx(1.0) / result : result;
}

}  // namespace

Expression::Expression() : node_(zero_node()) {}

Expression Expression::literal(cplx value) { return Expression(leaf(Kind::Literal, 0, value)); }
Expression Expression::coord(int k) { return Expression(leaf(Kind::Coord, k)); }
Expression Expression::conj_coord(int k) { return Expression(leaf(Kind::ConjCoord, k)); }
Expression Expression::nsq() { return Expression(leaf(Kind::Nsq)); }

Expression Expression::make(Kind kind, Expression a, Expression b, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->exponent = exponent;
  n->lhs = std::move(a.node_);
  if (kind == Kind::Sum || kind == Kind::Product || kind == Kind::Quotient) n->rhs = std::move(b.node_);
  return Expression(std::move(n));
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_literal() && b.is_literal()) return Expression::literal(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expression::make(Kind::Sum, a, b);
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_literal() && b.is_literal()) return Expression::literal(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expression();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expression::make(Kind::Product, a, b);
}

Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_literal() && b.is_literal() && !b.is_zero()) return Expression::literal(a.value() / b.value());
  if (a.is_zero() && !b.is_zero()) return Expression();
  if (b.is_one()) return a;
  return Expression::make(Kind::Quotient, a, b);
}

Expression operator-(const Expression& a) {
  if (a.is_literal()) return Expression::literal(-a.value());
  return Expression::literal(-1.0) * a;
}

Expression operator-(const Expression& a, const Expression& b) { return a + (-b); }

Expression pow(const Expression& base, int exponent) {
  if (exponent == 0) return Expression::literal(1.0);
  if (exponent == 1) return base;
  if (base.is_literal() && !(base.is_zero() && exponent < 0)) {
    return Expression::literal(ipow(base.value(), exponent));
  }
  return Expression::make(Kind::Power, base, Expression(), exponent);
}

Expression exp(const Expression& a) {
  if (a.is_literal()) return Expression::literal(std::exp(a.value()));
  return Expression::make(Kind::Exp, a);
}

Expression log(const Expression& a) {
  if (a.is_literal() && !a.is_zero()) return Expression::literal(std::log(a.value()));
  return Expression::make(Kind::Log, a);
}

std::size_t Expression::size() const {
  switch (kind()) {
    case Kind::Sum:
    case Kind::Product:
    case Kind::Quotient:
      return 1 + lhs().size() + rhs().size();
    case Kind::Power:
    case Kind::Exp:
    case Kind::Log:
      return 1 + lhs().size();
    default:
      return 1;
  }
}

int Expression::max_index() const {
  switch (kind()) {
    case Kind::Coord:
    case Kind::ConjCoord:
      return index();
    case Kind::Sum:
    case Kind::Product:
    case Kind::Quotient:
      return std::max(lhs().max_index(), rhs().max_index());
    case Kind::Power:
    case Kind::Exp:
    case Kind::Log:
      return lhs().max_index();
    default:
      return 0;
  }
}

Expression conj(const Expression& e) {
  switch (e.kind()) {
    case Kind::Coord:
      return Expression::conj_coord(e.index());
    case Kind::ConjCoord:
      return Expression::coord(e.index());
    case Kind::Literal:
      return Expression::literal(std::conj(e.value()));
    case Kind::Nsq:
      return e;
    case Kind::Sum:
      return conj(e.lhs()) + conj(e.rhs());
    case Kind::Product:
      return conj(e.lhs()) * conj(e.rhs());
    case Kind::Quotient:
      return conj(e.lhs()) / conj(e.rhs());
    case Kind::Power:
      return pow(conj(e.lhs()), e.exponent());
    case Kind::Exp:
      return exp(conj(e.lhs()));
    case Kind::Log:
      return log(conj(e.lhs()));
  }
  return e;
}

Expression wirtinger_d(const Expression& e, int k, Wirtinger kind) {
  const bool holo = kind == Wirtinger::Holomorphic;
  switch (e.kind()) {
    case Kind::Coord:
      return Expression::literal(holo && e.index() == k ? 1.0 : 0.0);
    case Kind::ConjCoord:
      return Expression::literal(!holo && e.index() == k ? 1.0 : 0.0);
    case Kind::Literal:
      return Expression();
    case Kind::Nsq:
      return holo ? Expression::conj_coord(k) : Expression::coord(k);
    case Kind::Sum:
      return wirtinger_d(e.lhs(), k, kind) + wirtinger_d(e.rhs(), k, kind);
    case Kind::Product: {
      const Expression a = e.lhs();
      const Expression b = e.rhs();
      return wirtinger_d(a, k, kind) * b + a * wirtinger_d(b, k, kind);
    }
    case Kind::Quotient: {
      const Expression a = e.lhs();
      const Expression b = e.rhs();
      const Expression da = wirtinger_d(a, k, kind);
      const Expression db = wirtinger_d(b, k, kind);
      if (db.is_zero()) return da / b;
      if (da.is_zero()) return -(a * db) / pow(b, 2);
      return (da * b - a * db) / pow(b, 2);
    }
    case Kind::Power: {
      const Expression base = e.lhs();
      const int m = e.exponent();
      return Expression::literal(static_cast<double>(m)) * pow(base, m - 1) * wirtinger_d(base, k, kind);
    }
    case Kind::Exp:
      return e * wirtinger_d(e.lhs(), k, kind);
    case Kind::Log:
      return wirtinger_d(e.lhs(), k, kind) / e.lhs();
  }
  return Expression();
}

namespace {

cplx eval_node(const Node* e, std::span<const cplx> p) {
  switch (e->kind) {
    case Kind::Coord:
      return p[static_cast<std::size_t>(e->index - 1)];
    case Kind::ConjCoord:
      return std::conj(p[static_cast<std::size_t>(e->index - 1)]);
    case Kind::Literal:
      return e->value;
    case Kind::Nsq: {
      double s = 0.0;
      for (const cplx& z : p) s += std::norm(z);
      return {s, 0.0};
    }
    case Kind::Sum:
      return eval_node(e->lhs.get(), p) + eval_node(e->rhs.get(), p);
    case Kind::Product:
      return eval_node(e->lhs.get(), p) * eval_node(e->rhs.get(), p);
    case Kind::Quotient: {
      const cplx den = eval_node(e->rhs.get(), p);
      if (den == cplx(0.0)) throw ChartSingularity("division by zero");
      return eval_node(e->lhs.get(), p) / den;
    }
    case Kind::Power: {
      const cplx base = eval_node(e->lhs.get(), p);
      if (base == cplx(0.0) && e->exponent < 0) throw ChartSingularity("negative power of zero");
      return ipow(base, e->exponent);
    }
    case Kind::Exp:
      return std::exp(eval_node(e->lhs.get(), p));
    case Kind::Log: {
      const cplx arg = eval_node(e->lhs.get(), p);
      if (arg == cplx(0.0)) throw ChartSingularity("log of zero");
      return std::log(arg);
    }
  }
  return {};
}

}  // namespace

cplx eval(const Expression& e, std::span<const cplx> p) {
  return eval_node(e.raw(), p);
}

Program::Program(std::span<const Expression> outputs) {
  using Key = std::tuple<int, int, int, std::uint64_t, std::uint64_t, std::uint32_t, std::uint32_t>;
  std::map<Key, std::uint32_t> numbered;
  std::unordered_map<const Node*, std::uint32_t> seen;
  auto emit = [&](auto&& self, const Node* e) -> std::uint32_t {
    if (const auto it = seen.find(e); it != seen.end()) return it->second;
    Op op{e->kind, e->index, e->exponent, e->value};
    if (e->lhs) op.lhs = self(self, e->lhs.get());
    if (e->rhs) op.rhs = self(self, e->rhs.get());
    const Key key{static_cast<int>(op.kind), op.index, op.exponent, std::bit_cast<std::uint64_t>(op.value.real()),
                  std::bit_cast<std::uint64_t>(op.value.imag()), op.lhs, op.rhs};
    auto [it, fresh] = numbered.try_emplace(key, static_cast<std::uint32_t>(ops_.size()));
    if (fresh) ops_.push_back(op);
    seen.emplace(e, it->second);
    return it->second;
  };
  for (const Expression& e : outputs) outputs_.push_back(emit(emit, e.raw()));
}

void Program::run(std::span<const cplx> p, std::vector<cplx>& out) const {
  std::vector<cplx> v(ops_.size());
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    const Op& op = ops_[k];
    switch (op.kind) {
      case Kind::Coord:
        v[k] = p[static_cast<std::size_t>(op.index - 1)];
        break;
      case Kind::ConjCoord:
        v[k] = std::conj(p[static_cast<std::size_t>(op.index - 1)]);
        break;
      case Kind::Literal:
        v[k] = op.value;
        break;
      case Kind::Nsq: {
        double s = 0.0;
        for (const cplx& z : p) s += std::norm(z);
        v[k] = {s, 0.0};
        break;
      }
      case Kind::Sum:
        v[k] = v[op.lhs] + v[op.rhs];
        break;
      case Kind::Product:
        v[k] = v[op.lhs] * v[op.rhs];
        break;
      case Kind::Quotient:
        if (v[op.rhs] == cplx(0.0)) throw ChartSingularity("division by zero");
        v[k] = v[op.lhs] / v[op.rhs];
        break;
      case Kind::Power:
        if (v[op.lhs] == cplx(0.0) && op.exponent < 0) throw ChartSingularity("negative power of zero");
        v[k] = ipow(v[op.lhs], op.exponent);
        break;
      case Kind::Exp:
        v[k] = std::exp(v[op.lhs]);
        break;
      case Kind::Log:
        if (v[op.lhs] == cplx(0.0)) throw ChartSingularity("log of zero");
        v[k] = std::log(v[op.lhs]);
        break;
    }
  }
  out.resize(outputs_.size());
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = v[outputs_[k]];
}

bool is_real_valued(const Expression& e, int dimension) {
  if (structurally_equal(e, conj(e))) return true;
  // Deterministic probe points on a fixed lattice of small complex numbers.
  int checked = 0;
  for (int t = 0; t < 24; ++t) {
    std::vector<cplx> p(static_cast<std::size_t>(dimension));
    for (int k = 0; k < dimension; ++k)
      p[static_cast<std::size_t>(k)] = cplx(0.37 * std::sin(1.3 * t + 0.7 * k) + 0.05 * k, 0.41 * std::cos(0.9 * t + 1.1 * k));
    try {
      const cplx v = eval_node(e.raw(), p);
      if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v))) return false;
      ++checked;
    } catch (const ChartSingularity&) {
    }
  }
  return checked > 0;
}

bool structurally_equal(const Expression& a, const Expression& b) {
  if (a.raw() == b.raw()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Coord:
    case Kind::ConjCoord:
      return a.index() == b.index();
    case Kind::Literal:
      return a.value() == b.value();
    case Kind::Nsq:
      return true;
    case Kind::Sum:
    case Kind::Product:
    case Kind::Quotient:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    case Kind::Power:
      return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
    case Kind::Exp:
    case Kind::Log:
      return structurally_equal(a.lhs(), b.lhs());
  }
  return false;
}

namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_literal(cplx v) {
  const std::string re = format_real(v.real());
  if (v.imag() == 0.0) {
    return std::signbit(v.real()) ? "(" + re + ")" : re;
  }
  return "(" + re + " + " + format_real(v.imag()) + "*i)";
}

void print(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Coord:
      out += "z" + std::to_string(e.index());
      return;
    case Kind::ConjCoord:
      out += "conj(z" + std::to_string(e.index()) + ")";
      return;
    case Kind::Literal:
      out += format_literal(e.value());
      return;
    case Kind::Nsq:
      out += "nsq";
      return;
    case Kind::Sum:
    case Kind::Product:
    case Kind::Quotient: {
      const char* op = e.kind() == Kind::Sum ? " + " : e.kind() == Kind::Product ? " * " : " / ";
      out += '(';
      print(e.lhs(), out);
      out += op;
      print(e.rhs(), out);
      out += ')';
      return;
    }
    case Kind::Power:
      out += '(';
      print(e.lhs(), out);
      out += '^' + std::to_string(e.exponent()) + ')';
      return;
    case Kind::Exp:
    case Kind::Log:
      out += e.kind() == Kind::Exp ? "exp(" : "log(";
      print(e.lhs(), out);
      out += ')';
      return;
  }
}

class Parser {
 public:
  Parser(std::string_view text, int dimension) : text_(text), dim_(dimension) {}

  Expression parse() {
    Expression e = sum();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, 1, static_cast<int>(at) + 1);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expression sum() {
    Expression e = product();
    for (;;) {
      if (accept('+')) {
        e = e + product();
      } else if (accept('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expression product() {
    Expression e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (!accept('^')) return base;
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("fractional powers are not supported", start);
    }
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 6) fail("exponent too large", start);
    int k = std::stoi(digits);
    if (negative) k = -k;
    if (paren) expect(')');
    return pow(base, k);
  }

  Expression number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
        pos_ = q;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string tok(text_.substr(start, pos_ - start));
    if (tok == ".") fail("malformed number", start);
    return Expression::literal(std::strtod(tok.c_str(), nullptr));
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expression e = sum();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "i") return Expression::literal({0.0, 1.0});
    if (id == "pi") return Expression::literal(std::numbers::pi);
    if (id == "nsq") return Expression::nsq();
    if (id == "conj" || id == "exp" || id == "log") {
      expect('(');
      Expression arg = sum();
      expect(')');
      if (id == "conj") return conj(arg);
      return id == "exp" ? exp(arg) : log(arg);
    }
    if (id.size() > 1 && id[0] == 'z') {
      const std::string_view digits = id.substr(1);
      bool ok = digits.size() < 6;
      for (char d : digits) ok = ok && std::isdigit(static_cast<unsigned char>(d));
      if (ok) {
        const int k = std::stoi(std::string(digits));
        if (k < 1 || k > dim_) {
          fail("coordinate index z" + std::to_string(k) + " out of range 1.." + std::to_string(dim_), start);
        }
        return Expression::coord(k);
      }
    }
    fail("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Expression& e) {
  std::string out;
  print(e, out);
  return out;
}

Expression parse_expression(std::string_view text, int dimension) { return Parser(text, dimension).parse(); }

}  // namespace chernlab::expr
