#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qfourier/cyclotomic.hpp"
#include "qfourier/function.hpp"
#include "qfourier/padic.hpp"
#include "qfourier/valuation.hpp"

namespace qfourier {

// Riemann sums over 0 <= x < l p^N with weights q^x.
struct IntegralConfig {
  QConfig q;
  RingPtr ring;
  int N = 1;
  std::int64_t l = 1;
  // Worker threads for the x-range split; the result does not depend on it.
  int threads = 1;

  IntegralConfig(QConfig q, RingPtr ring, int N, std::int64_t l = 1, int threads = 1);

  const PrimeContext& context() const { return q.context(); }
  std::uint32_t p() const { return q.context().p(); }
  // l p^N
  std::int64_t modulus() const;
  IntegralConfig at_level(int level) const;
  IntegralConfig with_q(QConfig other) const;
  IntegralConfig with_ring(RingPtr other) const;
  // Throws DomainError when the invariants fail.
  void validate() const;
};

// [l p^N], or l p^N when q = 1.
PadicScalar total_mass(const IntegralConfig& cfg);

// mu_q(a + l p^N Z_p) = q^a / [l p^N]
PadicScalar measure_ball(std::int64_t a, const IntegralConfig& cfg);

using PointFunction = std::function<CycloElement(std::int64_t)>;

// (1/[l p^N]) sum_{x < l p^N} f(x) q^x
CycloElement riemann_sum(const UDFunction& f, const IntegralConfig& cfg);
// Same sum with f bound to its own q (the measure still uses cfg.q).
CycloElement riemann_sum(const BoundFunction& f, const IntegralConfig& cfg);
CycloElement riemann_sum(const PointFunction& f, const IntegralConfig& cfg);

// sum_{x < l p^N} f(x) q^x * zeta^{shift(x)}, before the division.
CycloElement weighted_sum(const BoundFunction& f, const IntegralConfig& cfg, bool q_weights,
                          const std::function<std::int64_t(std::int64_t)>& shift = {});

struct IntegralResult {
  CycloElement value;
  // Valuation of the difference between the last two levels.
  ValuationBound stable_digits;
  int level = 0;
  bool converged = true;
  // Agreement between consecutive levels, first_level+1 .. level.
  std::vector<ValuationBound> history;
};

// Riemann sums at levels first_level..N_max.
IntegralResult iq_limit(const UDFunction& f, const IntegralConfig& cfg, int N_max,
                        int first_level = 1);

// I_0(f_1) - I_0(f) - f'(0) at level cfg.N; f is bound to cfg.q, the measure is q = 1.
CycloElement shift_identity_residual(const UDFunction& f, const IntegralConfig& cfg);

// B_m with B_1 = -1/2; m <= 30.
mpq_class bernoulli_exact(int m);

struct ClosedForm {
  // (t + log q) / (q xi e^t - 1)
  CycloElement literal;
  // (q - 1)/log q times the above
  CycloElement normalized;
};
ClosedForm laplace_closed_form(const PadicScalar& t, const Character& xi, const IntegralConfig& cfg);

}  // namespace qfourier
