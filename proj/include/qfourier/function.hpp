#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qfourier/cyclotomic.hpp"
#include "qfourier/padic.hpp"

namespace qfourier {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("parse error at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A uniformly differentiable function Z_p -> Q_p(zeta), as an immutable
// expression tree.
class UDFunction {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Const { mpq_class value; };
  struct Identity {};
  struct Power { NodePtr base; unsigned exponent; };
  struct QBracket {};
  struct ExpT { mpq_class t; };   // e^{tx} = (exp t)^x
  struct QExpT { mpq_class t; };  // q^{tx}
  struct Char { Character w; };   // phi_w
  struct Sum { NodePtr lhs, rhs; };
  struct Product { NodePtr lhs, rhs; };
  struct Scale { mpq_class factor; NodePtr arg; };
  struct Shift { NodePtr arg; std::int64_t offset; };   // f(x + a)
  struct Reflect { NodePtr arg; std::int64_t center; };  // f(z - x)

  struct Node {
    std::variant<Const, Identity, Power, QBracket, ExpT, QExpT, Char, Sum, Product, Scale, Shift,
                 Reflect>
        kind;
  };

  static UDFunction constant(const mpq_class& c);
  static UDFunction identity();
  static UDFunction qbracket();
  // Requires v_p(t) >= 1.
  static UDFunction exp_t(const mpq_class& t, std::uint32_t p);
  static UDFunction qexp_t(const mpq_class& t);
  static UDFunction character(const Character& w);

  UDFunction pow(unsigned k) const;
  UDFunction scaled(const mpq_class& c) const;
  friend UDFunction operator+(const UDFunction& a, const UDFunction& b);
  friend UDFunction operator-(const UDFunction& a, const UDFunction& b);
  friend UDFunction operator*(const UDFunction& a, const UDFunction& b);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  // Largest level among the characters in the tree (0 if none).
  int max_char_level() const;
  // Re-parseable text form.
  std::string to_string() const;

 private:
  explicit UDFunction(NodePtr root) : root_(std::move(root)) {}
  static UDFunction make(Node n);

  NodePtr root_;
  friend UDFunction shift(const UDFunction& f, std::int64_t a);
  friend UDFunction reflect(const UDFunction& f, std::int64_t z);
};

// x -> f(x + a)
UDFunction shift(const UDFunction& f, std::int64_t a);
// x -> f(z - x)
UDFunction reflect(const UDFunction& f, std::int64_t z);

struct FunctionEnv {
  std::uint32_t p = 3;
  // Level of `chi(k)` when no explicit level is given.
  int level = 1;
};

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | atom ('^' nat)?
//   atom   := 'x' | 'qbr' | rational | 'exp(' rational ')' | 'qexp(' rational ')'
//           | 'chi(' nat (',' nat)? ')' | 'shift(' expr ',' int ')'
//           | 'reflect(' expr ',' int ')' | '(' expr ')'
UDFunction parse_fn(std::string_view src, const FunctionEnv& env);

// A function bound to a value ring and a q. Parameters such as exp(t) and
// q^t are computed once at construction.
class BoundFunction {
 public:
  BoundFunction(UDFunction f, RingPtr ring, QConfig q);

  const RingPtr& ring() const { return ring_; }
  const QConfig& q() const { return q_; }
  const UDFunction& function() const { return f_; }

  CycloElement operator()(std::int64_t x) const;
  // f'(x), from the symbolic rules applied through the tree.
  CycloElement derivative_at(std::int64_t x) const;

  // f(x) in compact form: s * zeta^e, or a general element g.
  struct Sample {
    bool general = false;
    PadicScalar s;
    std::int64_t e = 0;
    CycloElement g;
  };
  Sample sample(std::int64_t x) const;
  // acc += sample * weight * zeta^shift
  static void accumulate(CyclicAccumulator& acc, const Sample& v, const PadicScalar& weight,
                         std::int64_t shift = 0);
  static void accumulate(CyclicAccumulator& acc, const Sample& v, std::int64_t shift = 0);

  struct Value;

 private:
  Value eval(const UDFunction::Node& n, std::int64_t x) const;
  std::pair<Value, Value> eval_d(const UDFunction::Node& n, std::int64_t x) const;

  UDFunction f_;
  RingPtr ring_;
  QConfig q_;
  std::unordered_map<const UDFunction::Node*, PadicScalar> params_;
};

CycloElement eval_fn(const UDFunction& f, std::int64_t x, const RingPtr& ring, const QConfig& q);
CycloElement derivative_at_zero(const UDFunction& f, const RingPtr& ring, const QConfig& q);

// Deterministic pseudo-random DSL sources for property tests. Constants avoid
// p in denominators; characters stay at level <= env.level.
std::vector<std::string> random_functions(std::uint64_t seed, int count, const FunctionEnv& env);

}  // namespace qfourier
