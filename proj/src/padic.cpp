#include "qfourier/padic.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace qfourier {

namespace {

int clamp_precision(long long a) {
  return static_cast<int>(std::clamp<long long>(a, -kExactPrecision, kExactPrecision));
}

void require_same_prime(const PadicScalar& a, const PadicScalar& b) {
  if (a.prime() != b.prime()) {
    throw DomainError("p-adic operands over different primes");
  }
}

// floor(log_p(k)) for k >= 1.
int floor_log(std::int64_t k, std::uint32_t p) {
  int e = 0;
  while (k >= static_cast<std::int64_t>(p)) {
    k /= p;
    ++e;
  }
  return e;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

const mpz_class& prime_power(std::uint32_t p, int k) {
  if (k < 0) throw DomainError("negative exponent in prime_power");
  thread_local std::unordered_map<std::uint32_t, std::vector<mpz_class>> cache;
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<int>(powers.size()) <= k) {
    powers.push_back(powers.back() * p);
  }
  return powers[static_cast<std::size_t>(k)];
}

int mpz_valuation(const mpz_class& n, std::uint32_t p) {
  if (n == 0) return kInfiniteValuation;
  mpz_class tmp = n;
  mpz_class pp = p;
  return static_cast<int>(mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), pp.get_mpz_t()));
}

std::int64_t factorial_valuation(std::int64_t k, std::uint32_t p) {
  std::int64_t v = 0;
  while (k > 0) {
    k /= p;
    v += k;
  }
  return v;
}

PrimeContext::PrimeContext(std::uint32_t p, int precision) : p_(p), precision_(precision) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (p < 3) throw DomainError("p = 2 is not supported (exp/log convergence disk differs)");
  if (precision < 4) throw DomainError("working precision must be at least 4 digits");
}

// ---------------------------------------------------------------------------
// PadicScalar

PadicScalar PadicScalar::zero(std::uint32_t p, int precision) {
  PadicScalar z;
  z.p_ = p;
  z.valuation_ = kInfiniteValuation;
  z.precision_ = clamp_precision(precision);
  z.unit_ = 0;
  return z;
}

PadicScalar PadicScalar::normalize(mpz_class x, int base_valuation, int precision,
                                   std::uint32_t p) {
  const long long rel = static_cast<long long>(precision) - base_valuation;
  if (rel <= 0) return zero(p, precision);
  if (precision < kExactPrecision) {
    const mpz_class& modulus = prime_power(p, static_cast<int>(rel));
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  }
  if (x == 0) return zero(p, precision);
  mpz_class pp = p;
  const auto k = mpz_remove(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t());
  PadicScalar r;
  r.p_ = p;
  r.valuation_ = base_valuation + static_cast<int>(k);
  r.precision_ = precision;
  r.unit_ = std::move(x);
  return r;
}

PadicScalar PadicScalar::from_integer(const mpz_class& n, const PrimeContext& ctx) {
  if (n == 0) return zero(ctx.p(), ctx.precision());
  const int v = mpz_valuation(n, ctx.p());
  return normalize(n / prime_power(ctx.p(), v), v, v + ctx.precision(), ctx.p());
}

PadicScalar PadicScalar::from_rational(const mpz_class& num, const mpz_class& den,
                                       const PrimeContext& ctx) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  if (num == 0) return zero(ctx.p(), ctx.precision());
  const std::uint32_t p = ctx.p();
  const int vn = mpz_valuation(num, p);
  const int vd = mpz_valuation(den, p);
  const mpz_class n = num / prime_power(p, vn);
  const mpz_class d = den / prime_power(p, vd);
  const int v = vn - vd;
  const mpz_class& modulus = prime_power(p, ctx.precision());
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), modulus.get_mpz_t());
  return normalize(n * inv, v, v + ctx.precision(), p);
}

PadicScalar PadicScalar::from_residue(const mpz_class& n, std::uint32_t p, int precision) {
  return normalize(n, 0, precision, p);
}

int PadicScalar::relative_precision() const {
  return is_zero() ? 0 : precision_ - valuation_;
}

PadicScalar PadicScalar::truncated(int precision) const {
  if (precision >= precision_) return *this;
  if (is_zero()) return zero(p_, precision);
  return normalize(unit_, valuation_, precision, p_);
}

std::vector<unsigned> PadicScalar::digits() const {
  std::vector<unsigned> out;
  if (is_zero()) return out;
  mpz_class u = unit_;
  while (u != 0) {
    out.push_back(static_cast<unsigned>(mpz_fdiv_ui(u.get_mpz_t(), p_)));
    mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_);
  }
  return out;
}

mpz_class PadicScalar::residue() const {
  if (is_zero()) return 0;
  if (valuation_ < 0) throw DomainError("residue of a non-integral p-adic value");
  return unit_ * prime_power(p_, valuation_);
}

std::string PadicScalar::to_string() const {
  std::ostringstream os;
  if (is_zero()) {
    if (precision_ >= kExactPrecision) return "0";
    os << "0 mod " << p_ << "^" << precision_;
    return os.str();
  }
  os << p_ << "^" << valuation_ << " * (";
  const auto ds = digits();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) os << " + ";
    os << ds[i];
    if (i == 1) os << "*" << p_;
    if (i > 1) os << "*" << p_ << "^" << i;
  }
  os << ") mod " << p_ << "^" << precision_;
  return os.str();
}

std::string PadicScalar::to_text() const {
  std::ostringstream os;
  bool first = true;
  const auto ds = digits();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    const long e = static_cast<long>(valuation_) + static_cast<long>(i);
    os << ds[i];
    if (e > 0) os << "*" << prime_power(p_, static_cast<int>(e)).get_str();
    if (e < 0) os << "*" << p_ << "^" << e;
  }
  if (first) os << "0";
  return os.str();
}

PadicScalar PadicScalar::operator-() const {
  if (is_zero()) return *this;
  return normalize(-unit_, valuation_, precision_, p_);
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  require_same_prime(a, b);
  const int prec = std::min(a.precision_, b.precision_);
  const int vmin = std::min(a.valuation_, b.valuation_);
  if (vmin >= prec) return PadicScalar::zero(a.p_, prec);
  mpz_class x = 0;
  if (a.valuation_ < prec) x += a.unit_ * prime_power(a.p_, a.valuation_ - vmin);
  if (b.valuation_ < prec) x += b.unit_ * prime_power(a.p_, b.valuation_ - vmin);
  return PadicScalar::normalize(std::move(x), vmin, prec, a.p_);
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

namespace {

void check_exhaustion(const PadicScalar& a, const PadicScalar& b, int result_precision) {
  if (result_precision <= 0 && a.precision() > 0 && b.precision() > 0) {
    throw PrecisionExhausted("precision exhausted: result known only mod p^" +
                             std::to_string(result_precision));
  }
}

}  // namespace

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  require_same_prime(a, b);
  if ((a.is_zero() && a.precision_ >= kExactPrecision) ||
      (b.is_zero() && b.precision_ >= kExactPrecision)) {
    return PadicScalar::zero(a.p_, kExactPrecision);
  }
  if (a.is_zero() || b.is_zero()) {
    long long prec;
    if (a.is_zero() && b.is_zero()) {
      prec = static_cast<long long>(a.precision_) + b.precision_;
    } else if (a.is_zero()) {
      prec = static_cast<long long>(a.precision_) + b.valuation_;
    } else {
      prec = static_cast<long long>(b.precision_) + a.valuation_;
    }
    return PadicScalar::zero(a.p_, clamp_precision(prec));
  }
  const int v = a.valuation_ + b.valuation_;
  const int r = std::min(a.relative_precision(), b.relative_precision());
  check_exhaustion(a, b, v + r);
  return PadicScalar::normalize(a.unit_ * b.unit_, v, v + r, a.p_);
}

PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
  require_same_prime(a, b);
  if (b.is_zero()) throw DivisionByZero("division by a p-adic value indistinguishable from zero");
  if (a.is_zero()) {
    if (a.precision_ >= kExactPrecision) return a;
    return PadicScalar::zero(
        a.p_, clamp_precision(static_cast<long long>(a.precision_) - b.valuation_));
  }
  const int v = a.valuation_ - b.valuation_;
  const int r = std::min(a.relative_precision(), b.relative_precision());
  check_exhaustion(a, b, v + r);
  const mpz_class& modulus = prime_power(a.p_, r);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), b.unit_.get_mpz_t(), modulus.get_mpz_t());
  return PadicScalar::normalize(a.unit_ * inv, v, v + r, a.p_);
}

PadicScalar PadicScalar::mul_integer(const mpz_class& n) const {
  if (n == 0) return zero(p_, kExactPrecision);
  const int k = mpz_valuation(n, p_);
  if (is_zero()) return zero(p_, clamp_precision(static_cast<long long>(precision_) + k));
  return normalize(unit_ * (n / prime_power(p_, k)), valuation_ + k, precision_ + k, p_);
}

PadicScalar PadicScalar::pow(std::int64_t e) const {
  if (e < 0) {
    const PadicScalar one =
        from_residue(1, p_, is_zero() ? std::max(precision_, 1) : relative_precision());
    return one / pow(-e);
  }
  if (e == 0) {
    return from_residue(1, p_, is_zero() ? std::max(precision_, 1) : relative_precision());
  }
  PadicScalar base = *this;
  PadicScalar result;
  bool have = false;
  auto n = static_cast<std::uint64_t>(e);
  while (n) {
    if (n & 1) {
      result = have ? result * base : base;
      have = true;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool congruent(const PadicScalar& a, const PadicScalar& b) { return (a - b).is_zero(); }

// ---------------------------------------------------------------------------
// exp / log

PadicScalar padic_log(const PadicScalar& a) {
  const std::uint32_t p = a.prime();
  if (a.is_zero() || a.valuation() != 0) {
    throw DomainError("p-adic log: argument is not a principal unit");
  }
  const int target = a.precision();
  const PadicScalar x = a - PadicScalar::from_residue(1, p, target + 1);
  if (x.is_zero()) return PadicScalar::zero(p, target);
  if (x.valuation() < 1) throw DomainError("p-adic log: argument is not a principal unit");

  const PrimeContext kctx(p, std::max(4, target + 8));
  const long long v = x.valuation();
  PadicScalar sum = PadicScalar::zero(p, kExactPrecision);
  PadicScalar power = x;
  for (std::int64_t k = 1;; ++k) {
    // every term from k on has valuation >= k*v - log_p(k) > k*v - floor_log - 1
    if (k * v - floor_log(k, p) - 1 >= target) break;
    const PadicScalar term = power / PadicScalar::from_integer(k, kctx);
    sum = (k % 2 == 1) ? sum + term : sum - term;
    power = power * x;
  }
  return sum.truncated(target);
}

PadicScalar padic_exp(const PadicScalar& a) {
  const std::uint32_t p = a.prime();
  const int target = a.precision();
  if (a.is_zero()) return PadicScalar::from_residue(1, p, target);
  if (a.valuation() < 1) throw DomainError("p-adic exp: argument outside the convergence disk");

  const PrimeContext kctx(p, std::max(4, target + 8));
  const long long v = a.valuation();
  PadicScalar sum = PadicScalar::from_residue(1, p, target);
  PadicScalar term = PadicScalar::from_residue(1, p, target + 8);
  for (std::int64_t k = 1;; ++k) {
    // v(a^j / j!) >= j*v - (j-1)/(p-1), increasing in j
    if ((k * v - target) * static_cast<long long>(p - 1) >= k - 1) break;
    term = term * a / PadicScalar::from_integer(k, kctx);
    sum = sum + term;
  }
  return sum.truncated(target);
}

// ---------------------------------------------------------------------------
// q-configuration

QConfig QConfig::one(const PrimeContext& ctx) {
  QConfig c(ctx);
  c.is_one_ = true;
  c.offset_ = 0;
  c.q_ = PadicScalar::from_integer(1, ctx);
  c.q_inverse_ = c.q_;
  c.log_q_ = PadicScalar::zero(ctx.p(), ctx.precision());
  c.limit_scalar_ = c.q_;
  c.inverse_limit_scalar_ = c.q_;
  return c;
}

QConfig QConfig::from_offset(const mpq_class& offset, const PrimeContext& ctx) {
  if (offset == 0) return one(ctx);
  const PadicScalar h = PadicScalar::from_rational(offset, ctx);
  if (h.valuation() < 1) {
    throw DomainError("q - 1 = " + offset.get_str() + " is not in the disk v_p(q - 1) >= 1");
  }
  QConfig c(ctx);
  c.is_one_ = false;
  c.offset_ = offset;
  c.q_ = PadicScalar::from_rational(mpq_class(offset + 1), ctx);
  c.q_inverse_ = PadicScalar::from_integer(1, ctx) / c.q_;
  c.log_q_ = padic_log(c.q_);
  c.limit_scalar_ = h / c.log_q_;
  c.inverse_limit_scalar_ = c.log_q_ / h;
  return c;
}

QConfig QConfig::with_precision(int precision) const {
  const PrimeContext ctx = ctx_.with_precision(precision);
  return is_one_ ? one(ctx) : from_offset(offset_, ctx);
}

std::string QConfig::q_string() const {
  const mpq_class q = offset_ + 1;
  return q.get_str();
}

namespace {

// ([n], q^n) for n >= 0 by binary splitting.
std::pair<PadicScalar, PadicScalar> bracket_and_power(std::int64_t n, const QConfig& q) {
  const std::uint32_t p = q.context().p();
  const int guard = q.context().precision() + 8;
  if (n == 0) {
    return {PadicScalar::zero(p, kExactPrecision), PadicScalar::from_residue(1, p, guard)};
  }
  if (n % 2 == 0) {
    auto [b, Q] = bracket_and_power(n / 2, q);
    const PadicScalar one = PadicScalar::from_residue(1, p, guard);
    return {b * (one + Q), Q * Q};
  }
  auto [b, Q] = bracket_and_power(n - 1, q);
  return {b + Q, Q * q.q()};
}

}  // namespace

PadicScalar q_bracket(std::int64_t x, const QConfig& q) {
  const PrimeContext& ctx = q.context();
  if (q.is_one()) return PadicScalar::from_integer(x, ctx);
  if (x == 0) return PadicScalar::zero(ctx.p(), ctx.precision());
  if (x < 0) return -(q_power(q, x) * q_bracket(-x, q));
  return bracket_and_power(x, q).first;
}

PadicScalar q_power(const QConfig& q, std::int64_t x) {
  if (q.is_one()) return PadicScalar::from_integer(1, q.context());
  return q.q().pow(x);
}

PadicScalar q_power(const QConfig& q, const PadicScalar& x) {
  if (!x.is_zero() && x.valuation() < 0) {
    throw DomainError("q^x requires x in Z_p");
  }
  if (q.is_one()) return PadicScalar::from_integer(1, q.context());
  return padic_exp(x * q.log_q());
}

}  // namespace qfourier
