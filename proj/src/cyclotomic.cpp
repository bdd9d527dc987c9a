#include "qfourier/cyclotomic.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

namespace qfourier {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

bool exact_zero(const PadicScalar& c) { return c.is_zero() && c.precision() >= kExactPrecision; }

// Only coefficient 0 can be nonzero; the others are exact zeros, so scalar
// shortcuts lose no precision information.
bool exact_scalar(const CycloElement& a) {
  return std::all_of(a.coeffs().begin() + 1, a.coeffs().end(), exact_zero);
}

void require_same_ring(const CycloElement& a, const CycloElement& b) {
  if (!a.ring() || !b.ring()) throw DomainError("uninitialized cyclotomic element");
  if (a.ring() != b.ring() &&
      (a.ring()->level() != b.ring()->level() || a.ring()->p() != b.ring()->p())) {
    throw DomainError("cyclotomic operands from different rings");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CycloRing

CycloRing::CycloRing(const PrimeContext& ctx, int level) : ctx_(ctx), level_(level) {
  if (level < 0) throw DomainError("cyclotomic level must be non-negative");
  order_ = ipow(ctx.p(), level);
  step_ = level == 0 ? 1 : order_ / ctx.p();
  degree_ = level == 0 ? 1 : static_cast<int>(order_ - step_);
}

std::vector<int> CycloRing::modulus() const {
  if (level_ == 0) return {-1, 1};  // z - 1
  std::vector<int> m(static_cast<std::size_t>(degree_) + 1, 0);
  for (std::uint32_t j = 0; j < p(); ++j) m[static_cast<std::size_t>(j * step_)] = 1;
  return m;
}

void CycloRing::reduce(std::vector<PadicScalar>& coeffs) const {
  const auto d = static_cast<std::size_t>(degree_);
  if (level_ == 0) {
    // z = 1
    PadicScalar s = PadicScalar::zero(p(), kExactPrecision);
    for (const auto& c : coeffs) s += c;
    coeffs.assign(1, s);
    return;
  }
  if (coeffs.size() < d) {
    coeffs.resize(d, PadicScalar::zero(p(), kExactPrecision));
    return;
  }
  // z^d = -(1 + z^s + ... + z^{(p-2)s}) with s = p^{n-1}
  for (std::size_t i = coeffs.size(); i-- > d;) {
    if (exact_zero(coeffs[i])) continue;
    const PadicScalar c = coeffs[i];
    for (std::uint32_t j = 0; j + 1 < p(); ++j) {
      auto& t = coeffs[i - d + j * static_cast<std::size_t>(step_)];
      t -= c;
    }
  }
  coeffs.resize(d);
}

RingPtr make_ring(const PrimeContext& ctx, int level) {
  return std::make_shared<const CycloRing>(ctx, level);
}

// ---------------------------------------------------------------------------
// Character

Character::Character(std::uint32_t p, int level, std::int64_t k) : p_(p), level_(level) {
  if (level < 0) throw DomainError("character level must be non-negative");
  k_ = mod(k, ipow(p, level));
}

std::int64_t Character::order() const { return ipow(p_, level_); }

std::int64_t Character::exponent_at(int ring_level) const {
  if (ring_level < level_) {
    throw DomainError("character of level " + std::to_string(level_) +
                      " does not live in a ring of level " + std::to_string(ring_level));
  }
  return k_ * ipow(p_, ring_level - level_);
}

Character Character::inverse() const { return {p_, level_, -k_}; }

Character operator*(const Character& a, const Character& b) {
  if (a.p_ != b.p_) throw DomainError("characters over different primes");
  const int level = std::max(a.level_, b.level_);
  return {a.p_, level, a.exponent_at(level) + b.exponent_at(level)};
}

bool operator==(const Character& a, const Character& b) {
  if (a.p_ != b.p_) return false;
  const int level = std::max(a.level_, b.level_);
  return a.exponent_at(level) % ipow(a.p_, level) == b.exponent_at(level) % ipow(a.p_, level);
}

std::string Character::to_string() const {
  return "(" + std::to_string(level_) + ", " + std::to_string(k_) + ")";
}

std::vector<Character> enumerate_characters(const CycloRing& ring) {
  std::vector<Character> out;
  out.reserve(static_cast<std::size_t>(ring.order()));
  for (std::int64_t k = 0; k < ring.order(); ++k) out.emplace_back(ring.p(), ring.level(), k);
  return out;
}

CycloElement char_eval(const Character& w, std::int64_t x, const RingPtr& ring) {
  if (w.p() != ring->p()) throw DomainError("character and ring over different primes");
  if (ring->level() < w.level()) {
    throw DomainError("character level " + std::to_string(w.level()) + " exceeds ring level " +
                      std::to_string(ring->level()));
  }
  const std::int64_t e = mod(mod(x, w.order()) * w.exponent(), w.order());
  return CycloElement::root_power(ring, e * (ring->order() / w.order()));
}

// ---------------------------------------------------------------------------
// CycloElement

CycloElement::CycloElement(RingPtr ring, std::vector<PadicScalar> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
  ring_->reduce(coeffs_);
}

CycloElement CycloElement::zero(RingPtr ring, int precision) {
  const auto d = static_cast<std::size_t>(ring->degree());
  const std::uint32_t p = ring->p();
  return CycloElement(std::move(ring), std::vector<PadicScalar>(d, PadicScalar::zero(p, precision)));
}

CycloElement CycloElement::one(RingPtr ring) {
  return from_scalar(ring, PadicScalar::from_integer(1, ring->context()));
}

CycloElement CycloElement::from_scalar(RingPtr ring, const PadicScalar& s) {
  std::vector<PadicScalar> c(static_cast<std::size_t>(ring->degree()),
                             PadicScalar::zero(ring->p(), kExactPrecision));
  c[0] = s;
  return CycloElement(std::move(ring), std::move(c));
}

CycloElement CycloElement::from_rational(RingPtr ring, const mpq_class& q) {
  const PadicScalar s = PadicScalar::from_rational(q, ring->context());
  return from_scalar(std::move(ring), s);
}

CycloElement CycloElement::root_power(RingPtr ring, std::int64_t e) {
  const auto order = static_cast<std::size_t>(ring->order());
  std::vector<PadicScalar> c(order, PadicScalar::zero(ring->p(), kExactPrecision));
  c[static_cast<std::size_t>(mod(e, ring->order()))] =
      PadicScalar::from_integer(1, ring->context());
  return CycloElement(std::move(ring), std::move(c));
}

bool CycloElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return c.is_zero(); });
}

bool CycloElement::in_base_field() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const auto& c) { return c.is_zero(); });
}

int CycloElement::precision() const {
  int a = kExactPrecision;
  for (const auto& c : coeffs_) a = std::min(a, c.precision());
  return a;
}

CycloElement CycloElement::truncated(int precision) const {
  CycloElement r = *this;
  for (auto& c : r.coeffs_) c = c.truncated(precision);
  return r;
}

CycloElement CycloElement::operator-() const {
  CycloElement r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
  CycloElement r = a;
  r += b;
  return r;
}

CycloElement& CycloElement::operator+=(const CycloElement& b) {
  require_same_ring(*this, b);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
  return *this;
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) {
  require_same_ring(a, b);
  CycloElement r = a;
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
  return r;
}

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
  require_same_ring(a, b);
  const std::size_t d = a.coeffs_.size();
  const std::uint32_t p = a.ring_->p();
  if (exact_scalar(b)) return b.coeffs_[0] * a;
  if (exact_scalar(a)) return a.coeffs_[0] * b;
  std::vector<PadicScalar> prod(2 * d - 1, PadicScalar::zero(p, kExactPrecision));
  for (std::size_t i = 0; i < d; ++i) {
    if (exact_zero(a.coeffs_[i])) continue;
    for (std::size_t j = 0; j < d; ++j) {
      prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return CycloElement(a.ring_, std::move(prod));
}

CycloElement operator*(const PadicScalar& s, const CycloElement& a) {
  CycloElement r = a;
  for (auto& c : r.coeffs_) c = s * c;
  return r;
}

CycloElement operator/(const CycloElement& a, const PadicScalar& s) {
  CycloElement r = a;
  for (auto& c : r.coeffs_) c = c / s;
  return r;
}

CycloElement operator/(const CycloElement& a, const CycloElement& b) {
  require_same_ring(a, b);
  if (exact_scalar(b)) return a / b.coeffs_[0];
  return a * b.inverse();
}

CycloElement CycloElement::mul_root(std::int64_t e) const {
  const std::int64_t order = ring_->order();
  std::vector<PadicScalar> c(static_cast<std::size_t>(order),
                             PadicScalar::zero(ring_->p(), kExactPrecision));
  const std::int64_t shift = mod(e, order);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    c[static_cast<std::size_t>(mod(static_cast<std::int64_t>(i) + shift, order))] = coeffs_[i];
  }
  return CycloElement(ring_, std::move(c));
}

CycloElement CycloElement::conjugate(std::int64_t j) const {
  const std::int64_t order = ring_->order();
  if (ring_->level() > 0 && mod(j, ring_->p()) == 0) {
    throw DomainError("conjugation exponent must be prime to p");
  }
  std::vector<PadicScalar> c(static_cast<std::size_t>(order),
                             PadicScalar::zero(ring_->p(), kExactPrecision));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    auto& slot = c[static_cast<std::size_t>(mod(static_cast<std::int64_t>(i) * j, order))];
    slot += coeffs_[i];
  }
  return CycloElement(ring_, std::move(c));
}

namespace {

// Product of the conjugates sigma_j(a) for j prime to p, skipping j = skip.
CycloElement conjugate_product(const CycloElement& a, std::int64_t skip) {
  const auto& ring = a.ring();
  CycloElement acc = CycloElement::one(ring);
  bool first = true;
  for (std::int64_t j = 1; j < ring->order(); ++j) {
    if (j % ring->p() == 0 || j == skip) continue;
    acc = first ? a.conjugate(j) : acc * a.conjugate(j);
    first = false;
  }
  return acc;
}

}  // namespace

namespace {

// Smallest level j such that a lies in Q_p(zeta_{p^j}), judged by exact zeros
// off the stride p^{n-j}; returns a rewritten in that ring.
std::optional<CycloElement> descend(const CycloElement& a) {
  const RingPtr& ring = a.ring();
  const int n = ring->level();
  for (int j = 1; j < n; ++j) {
    const auto stride = static_cast<std::size_t>(prime_power(ring->p(), n - j).get_ui());
    bool inside = true;
    for (std::size_t i = 0; i < a.coeffs().size() && inside; ++i) {
      if (i % stride != 0 && !exact_zero(a.coeffs()[i])) inside = false;
    }
    if (!inside) continue;
    RingPtr sub = make_ring(ring->context(), j);
    std::vector<PadicScalar> c;
    for (std::size_t i = 0; i < static_cast<std::size_t>(sub->degree()); ++i) c.push_back(a.coeffs()[i * stride]);
    return CycloElement(sub, std::move(c));
  }
  return std::nullopt;
}

}  // namespace

PadicScalar CycloElement::norm() const {
  if (ring_->level() == 0) return coeffs_[0];
  if (auto sub = descend(*this)) {
    return sub->norm().pow(ring_->degree() / sub->ring()->degree());
  }
  return conjugate_product(*this, 0).coeffs_[0];
}

CycloElement CycloElement::inverse() const {
  if (auto sub = descend(*this)) return sub->inverse().embed(ring_);
  if (exact_scalar(*this)) {
    if (coeffs_[0].is_zero()) throw DivisionByZero("element is not invertible at working precision");
    return from_scalar(ring_, PadicScalar::from_residue(1, ring_->p(), coeffs_[0].relative_precision()) /
                                  coeffs_[0]);
  }
  const CycloElement others = conjugate_product(*this, 1);
  const CycloElement full = others * *this;
  const PadicScalar n = full.coeffs_[0];
  if (n.is_zero()) throw DivisionByZero("element is not invertible at working precision");
  return others / n;
}

CycloElement CycloElement::embed(const RingPtr& target) const {
  if (target->p() != ring_->p() || target->level() < ring_->level()) {
    throw DomainError("cannot embed into a ring of lower level");
  }
  if (target->level() == ring_->level()) return CycloElement(target, coeffs_);
  const std::int64_t stride = target->order() / ring_->order();
  std::vector<PadicScalar> c(static_cast<std::size_t>(target->degree()),
                             PadicScalar::zero(ring_->p(), kExactPrecision));
  if (ring_->level() == 0) {
    c[0] = coeffs_[0];
  } else {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      c[i * static_cast<std::size_t>(stride)] = coeffs_[i];
    }
  }
  return CycloElement(target, std::move(c));
}

ValuationBound CycloElement::valuation_bound() const {
  const auto d = static_cast<std::int64_t>(coeffs_.size());
  const std::uint32_t p = ring_->p();
  // a = sum_j b_j (z - 1)^j with b_j = sum_{i >= j} C(i, j) c_i; the terms
  // have pairwise distinct valuations v(b_j) + j/d.
  bool found = false;
  Valuation best = Valuation::infinity();
  Valuation bound = Valuation::infinity();
  for (std::int64_t j = 0; j < d; ++j) {
    PadicScalar b = PadicScalar::zero(p, kExactPrecision);
    mpz_class binom = 1;  // C(i, j) for i = j
    for (std::int64_t i = j; i < d; ++i) {
      const auto& c = coeffs_[static_cast<std::size_t>(i)];
      if (!exact_zero(c)) {
        b += c.mul_integer(binom);
      }
      binom = binom * (i + 1) / (i + 1 - j);
    }
    const Valuation shift(j, d);
    if (b.precision() < kExactPrecision) bound = std::min(bound, Valuation(b.precision()) + shift);
    if (!b.is_zero()) {
      best = std::min(best, Valuation(b.valuation()) + shift);
      found = true;
    }
  }
  if (found && best < bound) return ValuationBound::exact(best);
  return ValuationBound::at_least(bound);
}

std::string CycloElement::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << " + ";
    os << "(" << coeffs_[i].to_string() << ")";
    if (i == 1) os << "*z";
    if (i > 1) os << "*z^" << i;
  }
  os << " mod Phi(" << ring_->p() << "^" << ring_->level() << ")";
  return os.str();
}

bool operator==(const CycloElement& a, const CycloElement& b) {
  return a.ring_->level() == b.ring_->level() && a.coeffs_ == b.coeffs_;
}

Valuation ext_valuation(const CycloElement& a) {
  const ValuationBound vb = a.valuation_bound();
  if (!vb.resolved) {
    throw IndistinguishableFromZero("element is zero at working precision (valuation >= " +
                                    vb.value.to_string() + ")");
  }
  return vb.value;
}

bool congruent(const CycloElement& a, const CycloElement& b) { return (a - b).is_zero(); }

// ---------------------------------------------------------------------------
// CyclicAccumulator

CyclicAccumulator::CyclicAccumulator(RingPtr ring)
    : ring_(std::move(ring)),
      slots_(static_cast<std::size_t>(ring_->order()),
             PadicScalar::zero(ring_->p(), kExactPrecision)) {}

void CyclicAccumulator::add_shifted(const CycloElement& a, std::int64_t e) {
  const std::int64_t order = ring_->order();
  const std::int64_t shift = mod(e, order);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    const auto& c = a.coeffs()[i];
    if (exact_zero(c)) continue;
    slots_[static_cast<std::size_t>(mod(static_cast<std::int64_t>(i) + shift, order))] += c;
  }
}

void CyclicAccumulator::add_shifted(const PadicScalar& s, std::int64_t e) {
  slots_[static_cast<std::size_t>(mod(e, ring_->order()))] += s;
}

CycloElement CyclicAccumulator::result() const { return CycloElement(ring_, slots_); }

}  // namespace qfourier
