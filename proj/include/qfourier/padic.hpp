#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qfourier {

// Error hierarchy shared by every module.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class DivisionByZero : public Error {
 public:
  using Error::Error;
};
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();
// Precision carried by values that are exact for every practical purpose
// (the additive identity used to seed sums).
inline constexpr int kExactPrecision = 1 << 20;

bool is_prime(std::uint64_t n);

// p^k as a big integer; k >= 0. Cached per thread.
const mpz_class& prime_power(std::uint32_t p, int k);

// v_p(n) for n != 0.
int mpz_valuation(const mpz_class& n, std::uint32_t p);

// v_p(k!) by Legendre's formula.
std::int64_t factorial_valuation(std::int64_t k, std::uint32_t p);

class PrimeContext {
 public:
  PrimeContext(std::uint32_t p, int precision);

  std::uint32_t p() const { return p_; }
  int precision() const { return precision_; }
  PrimeContext with_precision(int precision) const { return {p_, precision}; }

  bool operator==(const PrimeContext&) const = default;

 private:
  std::uint32_t p_;
  int precision_;
};

// An element of Q_p known modulo p^A: value = unit * p^v + O(p^A).
// Zero is stored with v = kInfiniteValuation and keeps its absolute precision.
class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar zero(std::uint32_t p, int precision = kExactPrecision);
  // Relative precision ctx.precision(), so A = M + v.
  static PadicScalar from_integer(const mpz_class& n, const PrimeContext& ctx);
  static PadicScalar from_integer(std::int64_t n, const PrimeContext& ctx) {
    return from_integer(mpz_class(static_cast<long>(n)), ctx);
  }
  static PadicScalar from_rational(const mpz_class& num, const mpz_class& den,
                                   const PrimeContext& ctx);
  static PadicScalar from_rational(const mpq_class& q, const PrimeContext& ctx) {
    return from_rational(q.get_num(), q.get_den(), ctx);
  }
  // The integer n known modulo p^precision (absolute).
  static PadicScalar from_residue(const mpz_class& n, std::uint32_t p, int precision);

  std::uint32_t prime() const { return p_; }
  bool is_zero() const { return valuation_ == kInfiniteValuation; }
  int valuation() const { return valuation_; }
  int precision() const { return precision_; }
  int relative_precision() const;
  const mpz_class& unit() const { return unit_; }

  // Truncates to absolute precision min(A, precision()).
  PadicScalar truncated(int precision) const;

  // Little-endian base-p digits of the unit part, trailing zeros removed.
  std::vector<unsigned> digits() const;
  // Canonical representative u*p^v reduced mod p^A; only for v >= 0.
  mpz_class residue() const;

  // `p^v * (d0 + d1*p + ...) mod p^A`
  std::string to_string() const;
  // `d0 + d1*p + d2*p^2 ...` with powers of p written out, e.g. `2 + 1*3 + 1*9`.
  std::string to_text() const;

  PadicScalar operator-() const;
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b);
  PadicScalar& operator+=(const PadicScalar& b) { return *this = *this + b; }
  PadicScalar& operator-=(const PadicScalar& b) { return *this = *this - b; }
  PadicScalar& operator*=(const PadicScalar& b) { return *this = *this * b; }

  // Multiplication by an exact integer; no relative precision is lost.
  PadicScalar mul_integer(const mpz_class& n) const;

  // Integer power; negative exponents invert.
  PadicScalar pow(std::int64_t e) const;

  // Structural equality (same valuation, unit and precision).
  bool operator==(const PadicScalar&) const = default;
  // a - b vanishes at the shared precision.
  friend bool congruent(const PadicScalar& a, const PadicScalar& b);

 private:
  static PadicScalar normalize(mpz_class x, int base_valuation, int precision,
                               std::uint32_t p);

  std::uint32_t p_ = 0;
  int valuation_ = kInfiniteValuation;
  int precision_ = 0;
  mpz_class unit_ = 0;
};

PadicScalar padic_log(const PadicScalar& a);
PadicScalar padic_exp(const PadicScalar& a);

// Parameter q of the q-deformation. q = 1 is a distinguished configuration
// with log q = 0 and limit scalar 1.
class QConfig {
 public:
  static QConfig one(const PrimeContext& ctx);
  // q = 1 + offset; requires v_p(offset) >= 1.
  static QConfig from_offset(const mpq_class& offset, const PrimeContext& ctx);

  bool is_one() const { return is_one_; }
  const PrimeContext& context() const { return ctx_; }
  const mpq_class& offset() const { return offset_; }
  const PadicScalar& q() const { return q_; }
  const PadicScalar& q_inverse() const { return q_inverse_; }
  const PadicScalar& log_q() const { return log_q_; }
  // (q - 1) / log q, the limit of p^N / [p^N].
  const PadicScalar& limit_scalar() const { return limit_scalar_; }
  // log q / (q - 1).
  const PadicScalar& inverse_limit_scalar() const { return inverse_limit_scalar_; }

  QConfig with_precision(int precision) const;
  std::string q_string() const;

 private:
  QConfig(const PrimeContext& ctx) : ctx_(ctx) {}

  PrimeContext ctx_;
  bool is_one_ = true;
  mpq_class offset_ = 0;
  PadicScalar q_, q_inverse_, log_q_, limit_scalar_, inverse_limit_scalar_;
};

// [x; q] = 1 + q + ... + q^{x-1}, and x itself when q = 1. Negative x uses
// [x] = -q^x [-x].
PadicScalar q_bracket(std::int64_t x, const QConfig& q);

// q^x by repeated squaring.
PadicScalar q_power(const QConfig& q, std::int64_t x);
// q^x = exp(x log q) for x in Z_p.
PadicScalar q_power(const QConfig& q, const PadicScalar& x);

}  // namespace qfourier
