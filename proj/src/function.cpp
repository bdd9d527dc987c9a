#include "qfourier/function.hpp"

#include <cctype>
#include <functional>
#include <random>
#include <sstream>

namespace qfourier {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int mpq_valuation(const mpq_class& q, std::uint32_t p) {
  if (q == 0) return kInfiniteValuation;
  return mpz_valuation(q.get_num(), p) - mpz_valuation(q.get_den(), p);
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

UDFunction UDFunction::make(Node n) { return UDFunction(std::make_shared<const Node>(std::move(n))); }

UDFunction UDFunction::constant(const mpq_class& c) { return make({Const{c}}); }
UDFunction UDFunction::identity() { return make({Identity{}}); }
UDFunction UDFunction::qbracket() { return make({QBracket{}}); }

UDFunction UDFunction::exp_t(const mpq_class& t, std::uint32_t p) {
  if (t != 0 && mpq_valuation(t, p) < 1) {
    throw DomainError("exp(" + t.get_str() + "x): parameter outside the convergence disk v_p(t) >= 1");
  }
  return make({ExpT{t}});
}

UDFunction UDFunction::qexp_t(const mpq_class& t) { return make({QExpT{t}}); }
UDFunction UDFunction::character(const Character& w) { return make({Char{w}}); }

UDFunction UDFunction::pow(unsigned k) const { return make({Power{root_, k}}); }
UDFunction UDFunction::scaled(const mpq_class& c) const {
  if (const auto* k = std::get_if<Const>(&root_->kind)) return constant(c * k->value);
  if (const auto* s = std::get_if<Scale>(&root_->kind)) {
    const mpq_class f = c * s->factor;
    if (f == 1) return UDFunction(s->arg);
    return make({Scale{f, s->arg}});
  }
  if (c == 1) return *this;
  return make({Scale{c, root_}});
}

UDFunction operator+(const UDFunction& a, const UDFunction& b) {
  return UDFunction::make({UDFunction::Sum{a.root_, b.root_}});
}

UDFunction operator-(const UDFunction& a, const UDFunction& b) { return a + b.scaled(-1); }

UDFunction operator*(const UDFunction& a, const UDFunction& b) {
  if (const auto* k = std::get_if<UDFunction::Const>(&a.root_->kind)) return b.scaled(k->value);
  if (const auto* k = std::get_if<UDFunction::Const>(&b.root_->kind)) return a.scaled(k->value);
  return UDFunction::make({UDFunction::Product{a.root_, b.root_}});
}

UDFunction shift(const UDFunction& f, std::int64_t a) {
  return UDFunction::make({UDFunction::Shift{f.root_, a}});
}

UDFunction reflect(const UDFunction& f, std::int64_t z) {
  return UDFunction::make({UDFunction::Reflect{f.root_, z}});
}

namespace {

int max_level(const UDFunction::Node& n) {
  using F = UDFunction;
  return std::visit(
      overloaded{
          [](const F::Char& c) { return c.w.level(); },
          [](const F::Power& c) { return max_level(*c.base); },
          [](const F::Sum& c) { return std::max(max_level(*c.lhs), max_level(*c.rhs)); },
          [](const F::Product& c) { return std::max(max_level(*c.lhs), max_level(*c.rhs)); },
          [](const F::Scale& c) { return max_level(*c.arg); },
          [](const F::Shift& c) { return max_level(*c.arg); },
          [](const F::Reflect& c) { return max_level(*c.arg); },
          [](const auto&) { return 0; },
      },
      n.kind);
}

void print(const UDFunction::Node& n, std::ostream& os, int context);

// Prints -n when n is a negative constant or a negatively scaled term.
bool print_negated(const UDFunction::Node& n, std::ostream& os) {
  if (const auto* k = std::get_if<UDFunction::Const>(&n.kind); k && k->value < 0) {
    print(UDFunction::constant(-k->value).root(), os, 1);
    return true;
  }
  if (const auto* s = std::get_if<UDFunction::Scale>(&n.kind); s && s->factor < 0) {
    if (s->factor != -1) {
      print(UDFunction::constant(-s->factor).root(), os, 1);
      os << "*";
    }
    print(*s->arg, os, 1);
    return true;
  }
  return false;
}

// Precedence: 0 sum, 1 product, 2 power/atom.
void print(const UDFunction::Node& n, std::ostream& os, int context) {
  using F = UDFunction;
  std::visit(
      overloaded{
          [&](const F::Const& c) {
            const bool paren = (c.value < 0 && context > 0) || (c.value.get_den() != 1 && context >= 2);
            if (paren) os << "(";
            os << c.value.get_str();
            if (paren) os << ")";
          },
          [&](const F::Identity&) { os << "x"; },
          [&](const F::QBracket&) { os << "qbr"; },
          [&](const F::ExpT& c) { os << "exp(" << c.t.get_str() << ")"; },
          [&](const F::QExpT& c) { os << "qexp(" << c.t.get_str() << ")"; },
          [&](const F::Char& c) {
            os << "chi(" << c.w.exponent() << "," << c.w.level() << ")";
          },
          [&](const F::Power& c) {
            print(*c.base, os, 3);
            os << "^" << c.exponent;
          },
          [&](const F::Sum& c) {
            if (context > 0) os << "(";
            print(*c.lhs, os, 0);
            std::ostringstream neg;
            if (print_negated(*c.rhs, neg)) {
              os << " - " << neg.str();
            } else {
              os << " + ";
              print(*c.rhs, os, 0);
            }
            if (context > 0) os << ")";
          },
          [&](const F::Product& c) {
            if (context > 1) os << "(";
            print(*c.lhs, os, 1);
            os << "*";
            print(*c.rhs, os, 1);
            if (context > 1) os << ")";
          },
          [&](const F::Scale& c) {
            if (context > 1) os << "(";
            print(*F::constant(c.factor).root_ptr(), os, 1);
            os << "*";
            print(*c.arg, os, 1);
            if (context > 1) os << ")";
          },
          [&](const F::Shift& c) {
            os << "shift(";
            print(*c.arg, os, 0);
            os << "," << c.offset << ")";
          },
          [&](const F::Reflect& c) {
            os << "reflect(";
            print(*c.arg, os, 0);
            os << "," << c.center << ")";
          },
      },
      n.kind);
}

}  // namespace

int UDFunction::max_char_level() const { return max_level(*root_); }

std::string UDFunction::to_string() const {
  std::ostringstream os;
  print(*root_, os, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, const FunctionEnv& env) : src_(src), env_(env) {}

  UDFunction parse() {
    UDFunction f = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek_digit() {
    skip_ws();
    return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]));
  }

  mpz_class natural() {
    if (!peek_digit()) fail("expected a number");
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return mpz_class(std::string(src_.substr(start, pos_ - start)));
  }

  std::int64_t integer() {
    const bool neg = accept('-');
    const mpz_class n = natural();
    if (!n.fits_slong_p()) fail("integer out of range");
    return neg ? -n.get_si() : n.get_si();
  }

  mpq_class rational() {
    const bool neg = accept('-');
    mpz_class num = natural();
    mpz_class den = 1;
    if (accept('/')) {
      const std::size_t at = pos_;
      den = natural();
      if (den == 0) throw ParseError(at, "zero denominator");
    }
    mpq_class q(num, den);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  UDFunction expr() {
    UDFunction f = term();
    for (;;) {
      if (accept('+')) {
        f = f + term();
      } else if (accept('-')) {
        f = f - term();
      } else {
        return f;
      }
    }
  }

  UDFunction term() {
    UDFunction f = factor();
    while (accept('*')) f = f * factor();
    return f;
  }

  UDFunction factor() {
    if (accept('-')) return factor().scaled(-1);
    UDFunction f = atom();
    if (accept('^')) {
      const std::size_t at = pos_;
      const mpz_class k = natural();
      if (!k.fits_uint_p()) throw ParseError(at, "exponent out of range");
      f = f.pow(static_cast<unsigned>(k.get_ui()));
    }
    return f;
  }

  UDFunction atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (accept('(')) {
      UDFunction f = expr();
      expect(')');
      return f;
    }
    if (peek_digit()) return UDFunction::constant(rational());
    const std::size_t start = pos_;
    const std::string id = identifier();
    if (id.empty()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    if (id == "x") return UDFunction::identity();
    if (id == "qbr") return UDFunction::qbracket();
    if (id == "exp") {
      expect('(');
      const std::size_t at = (skip_ws(), pos_);
      const mpq_class t = rational();
      expect(')');
      if (t != 0 && mpq_valuation(t, env_.p) < 1) {
        throw ParseError(at, "exp parameter " + t.get_str() +
                                 " outside the convergence disk (need v_p(t) >= 1)");
      }
      return UDFunction::exp_t(t, env_.p);
    }
    if (id == "qexp") {
      expect('(');
      const mpq_class t = rational();
      expect(')');
      return UDFunction::qexp_t(t);
    }
    if (id == "chi") {
      expect('(');
      const mpz_class k = natural();
      int level = env_.level;
      if (accept(',')) {
        const mpz_class n = natural();
        if (!n.fits_sint_p() || n > 12) fail("character level out of range");
        level = static_cast<int>(n.get_si());
      }
      expect(')');
      if (!k.fits_slong_p()) fail("character exponent out of range");
      return UDFunction::character(Character(env_.p, level, k.get_si()));
    }
    if (id == "shift" || id == "reflect") {
      expect('(');
      UDFunction f = expr();
      expect(',');
      const std::int64_t a = integer();
      expect(')');
      return id == "shift" ? qfourier::shift(f, a) : qfourier::reflect(f, a);
    }
    throw ParseError(start, "unknown identifier '" + id + "'");
  }

  std::string_view src_;
  FunctionEnv env_;
  std::size_t pos_ = 0;
};

}  // namespace

UDFunction parse_fn(std::string_view src, const FunctionEnv& env) { return Parser(src, env).parse(); }

// ---------------------------------------------------------------------------
// Evaluation

// Intermediate values stay as base-field scalars or monomials s * zeta^e as
// long as possible; only sums of distinct monomials need the full element.
struct BoundFunction::Value {
  enum class Kind { scalar, monomial, general } kind = Kind::scalar;
  PadicScalar s;
  std::int64_t e = 0;
  CycloElement g;

  static Value scalar(PadicScalar s) { return {Kind::scalar, std::move(s), 0, {}}; }

  CycloElement element(const RingPtr& ring) const {
    switch (kind) {
      case Kind::scalar:
        return CycloElement::from_scalar(ring, s);
      case Kind::monomial:
        return CycloElement::from_scalar(ring, s).mul_root(e);
      case Kind::general:
        return g;
    }
    return g;
  }
};

namespace {

using Value = BoundFunction::Value;

Value add(const Value& a, const Value& b, const RingPtr& ring) {
  using K = Value::Kind;
  if (a.kind == K::scalar && b.kind == K::scalar) return Value::scalar(a.s + b.s);
  if (a.kind == K::monomial && b.kind == K::monomial && a.e == b.e) {
    return {K::monomial, a.s + b.s, a.e, {}};
  }
  return {K::general, {}, 0, a.element(ring) + b.element(ring)};
}

Value mul(const Value& a, const Value& b, const RingPtr& ring) {
  using K = Value::Kind;
  if (a.kind != K::general && b.kind != K::general) {
    const std::int64_t e = (a.kind == K::monomial ? a.e : 0) + (b.kind == K::monomial ? b.e : 0);
    const K k = (a.kind == K::monomial || b.kind == K::monomial) ? K::monomial : K::scalar;
    return {k, a.s * b.s, e % ring->order(), {}};
  }
  if (a.kind == K::general && b.kind == K::general) return {K::general, {}, 0, a.g * b.g};
  const Value& g = a.kind == K::general ? a : b;
  const Value& m = a.kind == K::general ? b : a;
  CycloElement r = m.s * g.g;
  if (m.kind == K::monomial) r = r.mul_root(m.e);
  return {K::general, {}, 0, std::move(r)};
}

Value scale(const PadicScalar& c, const Value& a) {
  Value r = a;
  if (a.kind == Value::Kind::general) {
    r.g = c * a.g;
  } else {
    r.s = c * a.s;
  }
  return r;
}

Value power(const Value& a, unsigned k, const RingPtr& ring) {
  using K = Value::Kind;
  if (a.kind != K::general) {
    Value r = a;
    r.s = k == 0 ? PadicScalar::from_integer(1, ring->context()) : a.s.pow(k);
    r.e = (a.e * static_cast<std::int64_t>(k)) % ring->order();
    return r;
  }
  if (k == 0) return Value::scalar(PadicScalar::from_integer(1, ring->context()));
  Value r = a;
  for (unsigned i = 1; i < k; ++i) r = mul(r, a, ring);
  return r;
}

PadicScalar scalar_of(const mpq_class& q, const PrimeContext& ctx) {
  return PadicScalar::from_rational(q, ctx);
}

void collect_params(const UDFunction::Node& n, const QConfig& q,
                    std::unordered_map<const UDFunction::Node*, PadicScalar>& out) {
  using F = UDFunction;
  const PrimeContext& ctx = q.context();
  std::visit(overloaded{
                 [&](const F::Const& c) { out[&n] = scalar_of(c.value, ctx); },
                 [&](const F::ExpT& c) { out[&n] = padic_exp(scalar_of(c.t, ctx)); },
                 [&](const F::QExpT& c) {
                   if (q.is_one()) {
                     out[&n] = PadicScalar::from_integer(1, ctx);
                   } else if (c.t.get_den() == 1 && c.t.get_num().fits_slong_p()) {
                     out[&n] = q.q().pow(c.t.get_num().get_si());
                   } else {
                     const PadicScalar tl = scalar_of(c.t, ctx) * q.log_q();
                     if (!tl.is_zero() && tl.valuation() < 1) {
                       throw DomainError("qexp(" + c.t.get_str() + "): t log q outside the convergence disk");
                     }
                     out[&n] = padic_exp(tl);
                   }
                 },
                 [&](const F::Scale& c) {
                   out[&n] = scalar_of(c.factor, ctx);
                   collect_params(*c.arg, q, out);
                 },
                 [&](const F::Power& c) { collect_params(*c.base, q, out); },
                 [&](const F::Sum& c) {
                   collect_params(*c.lhs, q, out);
                   collect_params(*c.rhs, q, out);
                 },
                 [&](const F::Product& c) {
                   collect_params(*c.lhs, q, out);
                   collect_params(*c.rhs, q, out);
                 },
                 [&](const F::Shift& c) { collect_params(*c.arg, q, out); },
                 [&](const F::Reflect& c) { collect_params(*c.arg, q, out); },
                 [](const auto&) {},
             },
             n.kind);
}

}  // namespace

BoundFunction::BoundFunction(UDFunction f, RingPtr ring, QConfig q)
    : f_(std::move(f)), ring_(std::move(ring)), q_(std::move(q)) {
  if (f_.max_char_level() > ring_->level()) {
    throw DomainError("function uses characters of level " + std::to_string(f_.max_char_level()) +
                      " but the value ring has level " + std::to_string(ring_->level()));
  }
  if (q_.context().p() != ring_->p()) throw DomainError("q and ring over different primes");
  collect_params(f_.root(), q_, params_);
}

BoundFunction::Value BoundFunction::eval(const UDFunction::Node& n, std::int64_t x) const {
  using F = UDFunction;
  const PrimeContext& ctx = ring_->context();
  return std::visit(
      overloaded{
          [&](const F::Const&) { return Value::scalar(params_.at(&n)); },
          [&](const F::Identity&) { return Value::scalar(PadicScalar::from_integer(x, ctx)); },
          [&](const F::QBracket&) { return Value::scalar(q_bracket(x, q_)); },
          [&](const F::ExpT&) { return Value::scalar(params_.at(&n).pow(x)); },
          [&](const F::QExpT&) { return Value::scalar(params_.at(&n).pow(x)); },
          [&](const F::Char& c) {
            const std::int64_t order = c.w.order();
            const std::int64_t e = ((x % order + order) % order) * c.w.exponent() % order;
            return Value{Value::Kind::monomial, PadicScalar::from_integer(1, ctx),
                         e * (ring_->order() / order), {}};
          },
          [&](const F::Power& c) { return power(eval(*c.base, x), c.exponent, ring_); },
          [&](const F::Sum& c) { return add(eval(*c.lhs, x), eval(*c.rhs, x), ring_); },
          [&](const F::Product& c) { return mul(eval(*c.lhs, x), eval(*c.rhs, x), ring_); },
          [&](const F::Scale& c) { return scale(params_.at(&n), eval(*c.arg, x)); },
          [&](const F::Shift& c) { return eval(*c.arg, x + c.offset); },
          [&](const F::Reflect& c) { return eval(*c.arg, c.center - x); },
      },
      n.kind);
}

std::pair<BoundFunction::Value, BoundFunction::Value> BoundFunction::eval_d(
    const UDFunction::Node& n, std::int64_t x) const {
  using F = UDFunction;
  const PrimeContext& ctx = ring_->context();
  const Value zero = Value::scalar(PadicScalar::zero(ctx.p()));
  const Value one = Value::scalar(PadicScalar::from_integer(1, ctx));
  using Pair = std::pair<Value, Value>;
  return std::visit(
      overloaded{
          [&](const F::Const&) { return Pair{eval(n, x), zero}; },
          [&](const F::Identity&) { return Pair{eval(n, x), one}; },
          [&](const F::QBracket&) {
            if (q_.is_one()) return Pair{eval(n, x), one};
            // d/dx (1 - q^x)/(1 - q) = q^x log q / (q - 1)
            const PadicScalar d = q_.q().pow(x) * q_.inverse_limit_scalar();
            return Pair{eval(n, x), Value::scalar(d)};
          },
          [&](const F::ExpT& c) {
            Value v = eval(n, x);
            return Pair{v, Value::scalar(scalar_of(c.t, ctx) * v.s)};
          },
          [&](const F::QExpT& c) {
            Value v = eval(n, x);
            return Pair{v, Value::scalar(scalar_of(c.t, ctx) * q_.log_q() * v.s)};
          },
          [&](const F::Char&) { return Pair{eval(n, x), zero}; },
          [&](const F::Power& c) {
            if (c.exponent == 0) return Pair{one, zero};
            auto [u, du] = eval_d(*c.base, x);
            const Value lower = power(u, c.exponent - 1, ring_);
            const Value d = scale(PadicScalar::from_integer(c.exponent, ctx), mul(lower, du, ring_));
            return Pair{mul(lower, u, ring_), d};
          },
          [&](const F::Sum& c) {
            auto [a, da] = eval_d(*c.lhs, x);
            auto [b, db] = eval_d(*c.rhs, x);
            return Pair{add(a, b, ring_), add(da, db, ring_)};
          },
          [&](const F::Product& c) {
            auto [a, da] = eval_d(*c.lhs, x);
            auto [b, db] = eval_d(*c.rhs, x);
            return Pair{mul(a, b, ring_), add(mul(da, b, ring_), mul(a, db, ring_), ring_)};
          },
          [&](const F::Scale& c) {
            auto [a, da] = eval_d(*c.arg, x);
            const PadicScalar& k = params_.at(&n);
            return Pair{scale(k, a), scale(k, da)};
          },
          [&](const F::Shift& c) { return eval_d(*c.arg, x + c.offset); },
          [&](const F::Reflect& c) {
            auto [a, da] = eval_d(*c.arg, c.center - x);
            return Pair{a, scale(PadicScalar::from_integer(-1, ctx), da)};
          },
      },
      n.kind);
}

CycloElement BoundFunction::operator()(std::int64_t x) const {
  return eval(f_.root(), x).element(ring_);
}

BoundFunction::Sample BoundFunction::sample(std::int64_t x) const {
  Value v = eval(f_.root(), x);
  if (v.kind == Value::Kind::general) return {true, {}, 0, std::move(v.g)};
  return {false, std::move(v.s), v.e, {}};
}

void BoundFunction::accumulate(CyclicAccumulator& acc, const Sample& v, const PadicScalar& weight,
                               std::int64_t shift) {
  if (v.general) {
    acc.add_shifted(weight * v.g, shift);
  } else {
    acc.add_shifted(v.s * weight, v.e + shift);
  }
}

void BoundFunction::accumulate(CyclicAccumulator& acc, const Sample& v, std::int64_t shift) {
  if (v.general) {
    acc.add_shifted(v.g, shift);
  } else {
    acc.add_shifted(v.s, v.e + shift);
  }
}

CycloElement BoundFunction::derivative_at(std::int64_t x) const {
  return eval_d(f_.root(), x).second.element(ring_);
}

CycloElement eval_fn(const UDFunction& f, std::int64_t x, const RingPtr& ring, const QConfig& q) {
  return BoundFunction(f, ring, q)(x);
}

CycloElement derivative_at_zero(const UDFunction& f, const RingPtr& ring, const QConfig& q) {
  return BoundFunction(f, ring, q).derivative_at(0);
}

std::vector<std::string> random_functions(std::uint64_t seed, int count, const FunctionEnv& env) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return static_cast<std::int64_t>(rng() % n); };
  const std::int64_t p = env.p;
  auto coefficient = [&]() {
    static const char* dens[] = {"", "/2", "/7", "/11"};
    std::string c = std::to_string(1 + pick(9)) + dens[pick(4)];
    return c;
  };
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    const std::int64_t kind = depth == 0 ? pick(6) : pick(10);
    switch (kind) {
      case 0:
        return "x";
      case 1:
        return "x^" + std::to_string(2 + pick(3));
      case 2:
        return "exp(" + std::to_string(p * (1 + pick(2))) + ")";
      case 3:
        return "qbr";
      case 4:
        return "chi(" + std::to_string(pick(p)) + ")";
      case 5:
        return coefficient();
      case 6:
      case 7:
        return "(" + gen(depth - 1) + " + " + gen(depth - 1) + ")";
      case 8:
        return gen(depth - 1) + "*" + gen(depth - 1);
      default:
        return "shift(" + gen(depth - 1) + "," + std::to_string(pick(5) - 2) + ")";
    }
  };
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(gen(2));
  return out;
}

}  // namespace qfourier
