#include <gtest/gtest.h>

#include "qfourier/qintegral.hpp"

using namespace qfourier;

namespace {

UDFunction fn(const std::string& s, std::uint32_t p = 3) { return parse_fn(s, FunctionEnv{p, 1}); }

PadicScalar integer(std::int64_t n, const PrimeContext& ctx) { return PadicScalar::from_integer(n, ctx); }

}  // namespace

TEST(Measure, Ball) {
  const PrimeContext ctx(3, 12);
  const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), 1);
  EXPECT_TRUE(congruent(measure_ball(0, cfg), PadicScalar::from_rational(1, 3, ctx)));
}

TEST(Measure, TotalMassAndDistribution) {
  const PrimeContext ctx(3, 14);
  for (const mpq_class off : {mpq_class(0), mpq_class(3), mpq_class(9)}) {
    const QConfig q = QConfig::from_offset(off, ctx);
    const IntegralConfig c2(q, make_ring(ctx, 0), 2);
    const IntegralConfig c3 = c2.at_level(3);
    PadicScalar total = PadicScalar::zero(3);
    for (std::int64_t a = 0; a < 9; ++a) {
      total += measure_ball(a, c2);
      PadicScalar split = PadicScalar::zero(3);
      for (std::int64_t i = 0; i < 3; ++i) split += measure_ball(a + 9 * i, c3);
      EXPECT_TRUE(congruent(split, measure_ball(a, c2)));
    }
    EXPECT_TRUE(congruent(total, integer(1, ctx)));
  }
}

TEST(RiemannSum, Constant) {
  const PrimeContext ctx(5, 10);
  const QConfig q = QConfig::from_offset(5, ctx);
  for (int N = 1; N <= 4; ++N) {
    const IntegralConfig cfg(q, make_ring(ctx, 0), N);
    const CycloElement v = riemann_sum(fn("1", 5), cfg);
    EXPECT_TRUE(congruent(v, CycloElement::one(cfg.ring)));
  }
}

TEST(RiemannSum, ArithmeticSeries) {
  const PrimeContext ctx(3, 12);
  for (int N = 1; N <= 5; ++N) {
    const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), N);
    const std::int64_t pn = prime_power(3, N).get_si();
    const CycloElement expect =
        CycloElement::from_scalar(cfg.ring, PadicScalar::from_rational(pn - 1, 2, ctx));
    EXPECT_TRUE(congruent(riemann_sum(fn("x"), cfg), expect));
  }
}

TEST(RiemannSum, ThreeTermQSum) {
  const PrimeContext ctx(3, 12);
  const IntegralConfig cfg(QConfig::from_offset(3, ctx), make_ring(ctx, 0), 1);
  // (q + 2q^2)/(1 + q + q^2) at q = 4 is 36/21 = 12/7.
  EXPECT_TRUE(congruent(riemann_sum(fn("x"), cfg),
                        CycloElement::from_scalar(cfg.ring, PadicScalar::from_rational(12, 7, ctx))));
}

TEST(RiemannSum, ThreadCountIndependence) {
  const PrimeContext ctx(3, 16);
  const UDFunction f = fn("x^3*exp(3) + chi(1)*qbr");
  const IntegralConfig base(QConfig::from_offset(3, ctx), make_ring(ctx, 1), 6, 1, 1);
  const CycloElement ref = riemann_sum(f, base);
  for (int threads : {2, 3, 8}) {
    const IntegralConfig cfg(base.q, base.ring, 6, 1, threads);
    EXPECT_EQ(riemann_sum(f, cfg), ref) << threads;
  }
}

TEST(RiemannSum, LParameter) {
  const PrimeContext ctx(5, 12);
  const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), 2, 3);
  EXPECT_EQ(cfg.modulus(), 75);
  // (1/75) sum_{x<75} x = 37
  EXPECT_TRUE(congruent(riemann_sum(fn("x", 5), cfg), CycloElement::from_rational(cfg.ring, 37)));
  EXPECT_THROW(IntegralConfig(QConfig::one(ctx), make_ring(ctx, 0), 2, 5).validate(), DomainError);
}

TEST(IqLimit, Bernoulli) {
  // Dividing by p^10 costs 10 digits of absolute precision.
  const PrimeContext ctx(3, 24);
  const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), 10);
  const IntegralResult r1 = iq_limit(fn("x"), cfg, 10);
  // (3^10 - 1)/2 differs from -1/2 by 3^10/2.
  EXPECT_EQ((r1.value - CycloElement::from_rational(cfg.ring, mpq_class(-1, 2))).valuation_bound(),
            ValuationBound::exact(Valuation(10)));
  EXPECT_GE(r1.stable_digits.lower(), Valuation(8));
  const IntegralResult r2 = iq_limit(fn("x^2"), cfg, 10);
  EXPECT_GE((r2.value - CycloElement::from_rational(cfg.ring, mpq_class(1, 6))).valuation_bound().lower(),
            Valuation(8));
  const IntegralResult r0 = iq_limit(fn("1"), cfg, 6);
  EXPECT_FALSE(r0.stable_digits.resolved);
  EXPECT_TRUE(congruent(r0.value, CycloElement::one(cfg.ring)));
}

TEST(ShiftIdentity, Residuals) {
  const PrimeContext ctx(3, 16);
  const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), 8);
  EXPECT_TRUE(shift_identity_residual(fn("5/7"), cfg).is_zero());
  for (int N = 1; N <= 8; ++N) {
    EXPECT_TRUE(shift_identity_residual(fn("x"), cfg.at_level(N)).is_zero()) << N;
  }
  const IntegralResult stab = iq_limit(fn("exp(3)"), cfg, 8);
  const ValuationBound res = shift_identity_residual(fn("exp(3)"), cfg).valuation_bound();
  EXPECT_GE(res.lower(), stab.stable_digits.lower());
}

TEST(Bernoulli, Exact) {
  EXPECT_EQ(bernoulli_exact(0), 1);
  EXPECT_EQ(bernoulli_exact(1), mpq_class(-1, 2));
  EXPECT_EQ(bernoulli_exact(12), mpq_class(-691, 2730));
  EXPECT_EQ(bernoulli_exact(7), 0);
  EXPECT_EQ(bernoulli_exact(30), mpq_class(mpz_class("8615841276005"), 14322));
}

TEST(ClosedForm, TZero) {
  const PrimeContext ctx(3, 16);
  const QConfig q = QConfig::from_offset(3, ctx);
  const IntegralConfig cfg(q, make_ring(ctx, 1), 6);
  const ClosedForm one = laplace_closed_form(PadicScalar::zero(3), Character(3, 0, 0), cfg);
  EXPECT_TRUE(congruent(one.normalized, CycloElement::one(cfg.ring)));
  EXPECT_TRUE(congruent(one.literal, CycloElement::from_scalar(cfg.ring, q.inverse_limit_scalar())));

  const Character xi(3, 1, 1);
  const ClosedForm cf = laplace_closed_form(PadicScalar::zero(3), xi, cfg);
  const IntegralResult lim = iq_limit(UDFunction::character(xi), cfg, 6);
  // (q - 1)/(q zeta - 1), exact at every level.
  const CycloElement z = CycloElement::root_power(cfg.ring, 1);
  const CycloElement qm1 = CycloElement::from_rational(cfg.ring, 3);
  const CycloElement expect = qm1 / (z * q.q() - CycloElement::one(cfg.ring));
  EXPECT_TRUE(congruent(lim.value, expect));
  EXPECT_TRUE(congruent(cf.normalized, expect));
}

TEST(RiemannSum, ConstantPathMatchesPointwiseSum) {
  const PrimeContext ctx(5, 12);
  for (const mpq_class off : {mpq_class(0), mpq_class(5), mpq_class(10, 3)}) {
    const QConfig q = QConfig::from_offset(off, ctx);
    const IntegralConfig cfg(q, make_ring(ctx, 1), 3);
    const CycloElement c = CycloElement::from_rational(cfg.ring, mpq_class(3, 7));
    const PointFunction pointwise = [&](std::int64_t) { return c; };
    EXPECT_TRUE(congruent(riemann_sum(fn("3/7", 5), cfg), riemann_sum(pointwise, cfg))) << off;
  }
}
