#pragma once

// Coefficient expressions over holomorphic coordinates z1..zn and their
// conjugates, with exact Wirtinger differentiation.
//
// Expressions are immutable trees shared through reference counting; every
// operation below is pure and safe to call concurrently. Construction goes
// through folding constructors (literal arithmetic, 0 and 1 absorption), so a
// printed tree re-parses to a structurally identical tree.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chernlab {

using cplx = std::complex<double>;

namespace expr {

enum class Kind : std::uint8_t {
  Coord,      // z_k
  ConjCoord,  // conj(z_k)
  Literal,    // complex constant
  Sum,
  Product,
  Quotient,
  Power,      // integer exponent
  Exp,
  Log,
  Nsq,        // sum_k z_k conj(z_k)
};

enum class Wirtinger : std::uint8_t { Holomorphic, Antiholomorphic };

class Expression;

struct Node {
  Kind kind;
  int index = 0;     // coordinate index (1-based) for Coord / ConjCoord
  int exponent = 0;  // Power
  cplx value{};      // Literal
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

class Expression {
 public:
  /// The zero literal.
  Expression();

  static Expression literal(cplx value);
  static Expression coord(int k);
  static Expression conj_coord(int k);
  static Expression nsq();

  Kind kind() const noexcept { return node_->kind; }
  int index() const noexcept { return node_->index; }
  int exponent() const noexcept { return node_->exponent; }
  cplx value() const noexcept { return node_->value; }
  Expression lhs() const { return Expression(node_->lhs); }
  Expression rhs() const { return Expression(node_->rhs); }

  bool is_literal() const noexcept { return node_->kind == Kind::Literal; }
  bool is_zero() const noexcept { return is_literal() && node_->value == cplx(0.0); }
  bool is_one() const noexcept { return is_literal() && node_->value == cplx(1.0); }

  /// Number of nodes (shared subtrees counted per occurrence).
  std::size_t size() const;
  /// Largest coordinate index referenced; 0 when none.
  int max_index() const;

  const Node* raw() const noexcept { return node_.get(); }

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend Expression pow(const Expression& base, int exponent);
  friend Expression exp(const Expression& a);
  friend Expression log(const Expression& a);

  Expression& operator+=(const Expression& b) { return *this = *this + b; }
  Expression& operator*=(const Expression& b) { return *this = *this * b; }

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expression make(Kind kind, Expression a, Expression b = Expression(), int exponent = 0);

  std::shared_ptr<const Node> node_;
};

/// Structural conjugation: z_k <-> conj(z_k), literals conjugated, distributes
/// over every node kind. nsq is self-conjugate.
Expression conj(const Expression& e);

/// Exact symbolic Wirtinger derivative d/dz_k (or d/dconj(z_k)), k is 1-based.
Expression wirtinger_d(const Expression& e, int k, Wirtinger kind);

/// Evaluates at a point with coordinates p[0..n-1] = z_1..z_n. Throws
/// ChartSingularity on division by zero, log(0), or a negative power of 0.
cplx eval(const Expression& e, std::span<const cplx> p);

/// Straight-line form of several expressions. Structurally equal subtrees are
/// merged and evaluated once per point; values match eval() exactly.
class Program {
 public:
  explicit Program(std::span<const Expression> outputs);

  std::size_t size() const noexcept { return outputs_.size(); }
  std::size_t instructions() const noexcept { return ops_.size(); }

  /// Writes one value per output into `out` (resized to size()).
  void run(std::span<const cplx> p, std::vector<cplx>& out) const;

 private:
  struct Op {
    Kind kind;
    int index = 0;
    int exponent = 0;
    cplx value{};
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
  };

  std::vector<Op> ops_;
  std::vector<std::uint32_t> outputs_;
};

bool structurally_equal(const Expression& a, const Expression& b);

/// True when e = conj(e) structurally, or e is real (to 1e-10) at fixed probe
/// points of C^dimension where it is regular.
bool is_real_valued(const Expression& e, int dimension);

/// Fully parenthesized text that parse_expression maps back to the same tree.
std::string to_string(const Expression& e);

/// Grammar (LL(1)):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] integer | '^' '(' ['-'] integer ')')?
///   primary := number | 'i' | 'pi' | 'nsq' | 'z'k | fn '(' sum ')' | '(' sum ')'
///   fn      := 'conj' | 'exp' | 'log'
/// Coordinates with k outside 1..dimension are rejected. Column numbers in
/// ParseError are 1-based offsets into `text`.
Expression parse_expression(std::string_view text, int dimension);

inline Expression operator*(const Expression& a, cplx s) { return a * Expression::literal(s); }
inline Expression operator*(cplx s, const Expression& a) { return Expression::literal(s) * a; }

}  // namespace expr

using expr::Expression;

}  // namespace chernlab
