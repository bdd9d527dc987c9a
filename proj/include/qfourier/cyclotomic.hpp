#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qfourier/padic.hpp"
#include "qfourier/valuation.hpp"

namespace qfourier {

class IndistinguishableFromZero : public Error {
 public:
  using Error::Error;
};

// Q_p(zeta) for zeta a primitive p^n-th root of unity, realized as
// Q_p[z] / Phi_{p^n}(z) with Phi_{p^n}(z) = sum_{j<p} z^{j p^{n-1}}.
class CycloRing {
 public:
  CycloRing(const PrimeContext& ctx, int level);

  const PrimeContext& context() const { return ctx_; }
  std::uint32_t p() const { return ctx_.p(); }
  int level() const { return level_; }
  // phi(p^n), or 1 at level 0.
  int degree() const { return degree_; }
  // p^n, the order of zeta.
  std::int64_t order() const { return order_; }
  // Coefficients of Phi_{p^n}, low degree first (length degree + 1).
  std::vector<int> modulus() const;

  // Reduces a coefficient vector of any length modulo Phi_{p^n}.
  void reduce(std::vector<PadicScalar>& coeffs) const;

 private:
  PrimeContext ctx_;
  int level_;
  int degree_;
  std::int64_t order_;
  std::int64_t step_;  // p^{n-1}
};

using RingPtr = std::shared_ptr<const CycloRing>;

RingPtr make_ring(const PrimeContext& ctx, int level);

// A character phi_w of Z_p with w = zeta_{p^n}^k; k is kept mod p^n.
class Character {
 public:
  Character(std::uint32_t p, int level, std::int64_t k);

  std::uint32_t p() const { return p_; }
  int level() const { return level_; }
  std::int64_t exponent() const { return k_; }
  std::int64_t order() const;
  bool is_trivial() const { return k_ == 0; }

  // Exponent of zeta_{p^L} representing w, for L >= level().
  std::int64_t exponent_at(int ring_level) const;

  Character inverse() const;
  // Group law; the result lives at the larger of the two levels.
  friend Character operator*(const Character& a, const Character& b);
  // Same root of unity, possibly different levels.
  friend bool operator==(const Character& a, const Character& b);

  // "(n, k)"
  std::string to_string() const;

 private:
  std::uint32_t p_;
  int level_;
  std::int64_t k_;
};

class CycloElement {
 public:
  CycloElement() = default;
  CycloElement(RingPtr ring, std::vector<PadicScalar> coeffs);

  static CycloElement zero(RingPtr ring, int precision = kExactPrecision);
  static CycloElement one(RingPtr ring);
  static CycloElement from_scalar(RingPtr ring, const PadicScalar& s);
  static CycloElement from_rational(RingPtr ring, const mpq_class& q);
  // zeta^e, any integer e.
  static CycloElement root_power(RingPtr ring, std::int64_t e);

  const RingPtr& ring() const { return ring_; }
  const std::vector<PadicScalar>& coeffs() const { return coeffs_; }
  const PadicScalar& coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }

  bool is_zero() const;
  bool in_base_field() const;
  int precision() const;
  CycloElement truncated(int precision) const;

  CycloElement operator-() const;
  friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator*(const PadicScalar& s, const CycloElement& a);
  friend CycloElement operator*(const CycloElement& a, const PadicScalar& s) { return s * a; }
  friend CycloElement operator/(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator/(const CycloElement& a, const PadicScalar& s);
  CycloElement& operator+=(const CycloElement& b);
  CycloElement& operator-=(const CycloElement& b) { return *this = *this - b; }
  CycloElement& operator*=(const CycloElement& b) { return *this = *this * b; }

  // this * zeta^e, without precision loss.
  CycloElement mul_root(std::int64_t e) const;
  // The Galois conjugate zeta -> zeta^j, p not dividing j.
  CycloElement conjugate(std::int64_t j) const;
  // Product of all conjugates (the resultant with Phi_{p^n} up to sign).
  PadicScalar norm() const;
  CycloElement inverse() const;
  // Image under Q_p(zeta_{p^n}) -> Q_p(zeta_{p^L}), zeta_{p^n} = zeta_{p^L}^{p^{L-n}}.
  CycloElement embed(const RingPtr& target) const;

  // Valuation normalized so v(p) = 1, read off the expansion in powers of
  // zeta - 1; a lower bound when the element is zero at working precision.
  ValuationBound valuation_bound() const;

  // "c_0 + c_1*z + ... mod Phi(p^n)"
  std::string to_string() const;

  // Structural equality of coefficients.
  friend bool operator==(const CycloElement& a, const CycloElement& b);

 private:
  RingPtr ring_;
  std::vector<PadicScalar> coeffs_;
};

// Resolved valuation; throws IndistinguishableFromZero otherwise.
Valuation ext_valuation(const CycloElement& a);

// a - b vanishes at the shared precision.
bool congruent(const CycloElement& a, const CycloElement& b);

// The characters of C_{p^n} at the ring's level, in exponent order.
std::vector<Character> enumerate_characters(const CycloRing& ring);

// phi_w(x) = w^x in a ring of level >= w.level().
CycloElement char_eval(const Character& w, std::int64_t x, const RingPtr& ring);

// Accumulates sums of shifted elements modulo z^{p^n} - 1; the reduction
// modulo Phi_{p^n} happens once at the end.
class CyclicAccumulator {
 public:
  explicit CyclicAccumulator(RingPtr ring);
  void add(const CycloElement& a) { add_shifted(a, 0); }
  // += a * zeta^e
  void add_shifted(const CycloElement& a, std::int64_t e);
  void add_shifted(const PadicScalar& s, std::int64_t e);
  CycloElement result() const;

 private:
  RingPtr ring_;
  std::vector<PadicScalar> slots_;
};

}  // namespace qfourier
