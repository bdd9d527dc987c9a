#include <gtest/gtest.h>

#include "qfourier/fourier.hpp"

using namespace qfourier;

namespace {

UDFunction fn(const std::string& s, std::uint32_t p = 3) { return parse_fn(s, FunctionEnv{p, 1}); }

struct Params {
  PrimeContext ctx;
  QConfig q;
  Params(std::uint32_t p, int M, const mpq_class& offset)
      : ctx(p, M), q(QConfig::from_offset(offset, ctx)) {}
  IntegralConfig cfg(int level, int N) const { return IntegralConfig(q, make_ring(ctx, level), N); }
};

CycloElement scalar(const RingPtr& r, const PadicScalar& s) { return CycloElement::from_scalar(r, s); }

PadicScalar bracket_ratio(const QConfig& q, std::int64_t pn) {
  return PadicScalar::from_integer(pn, q.context()) / q_bracket(pn, q);
}

}  // namespace

TEST(Transform, ConstantFunction) {
  const Params s(3, 16, 3);
  for (int N : {1, 3}) {
    const IntegralConfig cfg = s.cfg(1, N);
    const SpectralTable t = iq_transform(fn("1"), 1, cfg);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_TRUE(congruent(t.entry(0), CycloElement::one(cfg.ring)));
    const CycloElement one = CycloElement::one(cfg.ring);
    const CycloElement qe = scalar(cfg.ring, s.q.q());
    for (std::size_t i = 1; i < 3; ++i) {
      const CycloElement w = CycloElement::root_power(cfg.ring, t.characters[i].exponent());
      EXPECT_TRUE(congruent(t.entry(i), (one - qe) / (one - w * qe))) << i;
    }
  }
}

TEST(Transform, OrthogonalityAtQOne) {
  const Params s(5, 10, 0);
  const SpectralTable t = iq_transform(fn("1", 5), 1, s.cfg(1, 2));
  EXPECT_TRUE(congruent(t.entry(0), CycloElement::one(t.ring)));
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_TRUE(t.entry(i).is_zero());
}

TEST(Transform, ThreadCountIndependence) {
  const Params s(3, 16, 3);
  IntegralConfig cfg = s.cfg(2, 5);
  const UDFunction f = fn("x^2*chi(1) + exp(3)");
  const SpectralTable ref = iq_transform(f, 2, cfg);
  cfg.threads = 4;
  const SpectralTable par = iq_transform(f, 2, cfg);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(ref.sums[i], par.sums[i]);
}

TEST(Transform, TwistedMatchesShiftedCharacter) {
  // I_q(phi_{w q^{-1}} f) equals (1/[p^N]) sum f(x) w^x.
  const Params s(3, 16, 3);
  const IntegralConfig cfg = s.cfg(1, 3);
  const UDFunction f = fn("x + 2");
  const SpectralTable t = iq_transform(f, 1, cfg, Twist::q_inverse);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CycloElement sum = CycloElement::zero(cfg.ring);
    for (std::int64_t x = 0; x < 27; ++x) {
      sum += eval_fn(f, x, cfg.ring, s.q) * char_eval(t.characters[i], x, cfg.ring);
    }
    EXPECT_TRUE(congruent(t.entry(i), sum / q_bracket(27, s.q)));
  }
}

TEST(InverseFinite, Examples) {
  const Params s(3, 16, 3);
  const IntegralConfig cfg = s.cfg(1, 1);
  const PadicScalar ratio = bracket_ratio(s.q, 3);
  const CycloElement v0 = inverse_finite(iq_transform(fn("1"), 1, cfg), 0);
  EXPECT_TRUE(congruent(v0, scalar(cfg.ring, ratio)));
  const CycloElement v2 = inverse_finite(iq_transform(fn("x"), 1, cfg), 2);
  const PadicScalar expect = ratio * PadicScalar::from_integer(std::int64_t{2}, s.ctx) * q_power(s.q, 2);
  EXPECT_TRUE(congruent(v2, scalar(cfg.ring, expect)));
  EXPECT_THROW(inverse_finite(iq_transform(fn("x"), 1, s.cfg(1, 2)), 0), DomainError);
}

TEST(InverseFinite, PlainDiscreteInversionAtQOne) {
  const Params s(3, 12, 0);
  const IntegralConfig cfg = s.cfg(2, 2);
  const UDFunction f = fn("x^3 + chi(1)*x + 1/5");
  const SpectralTable t = iq_transform(f, 2, cfg);
  for (std::int64_t x = 0; x < 9; ++x) {
    EXPECT_TRUE(congruent(inverse_finite(t, x), eval_fn(f, x, cfg.ring, s.q))) << x;
  }
}

TEST(InverseLimit, Examples) {
  const Params s(3, 20, 3);
  const IntegralConfig cfg = s.cfg(1, 4);
  const IntegralResult one = inverse_limit(fn("1"), 0, 4, cfg);
  EXPECT_GE((one.value - CycloElement::one(one.value.ring())).valuation_bound().lower(), Valuation(4));

  const IntegralResult lin = inverse_limit(fn("x"), 2, 4, cfg);
  const PadicScalar target = PadicScalar::from_integer(std::int64_t{2}, s.ctx) * q_power(s.q, 2);
  EXPECT_GE((lin.value - scalar(lin.value.ring(), target)).valuation_bound().lower(), Valuation(4));

  const IntegralResult ch = inverse_limit(fn("chi(1)"), 1, 4, cfg);
  const CycloElement xi_q = CycloElement::root_power(ch.value.ring(), ch.value.ring()->order() / 3) * s.q.q();
  EXPECT_GE((ch.value - xi_q).valuation_bound().lower(), Valuation(4));

  EXPECT_THROW(inverse_limit(fn("x"), 0, 3, Params(3, 12, 0).cfg(1, 3)), DomainError);
}

TEST(Convolution, Woodcock) {
  const Params s(3, 16, 0);
  const IntegralConfig cfg = s.cfg(1, 3);
  const BandLimited c11 = convolve(fn("1"), fn("1"), 1, cfg, ConvolutionMode::woodcock_q1);
  for (std::int64_t z = 0; z < 5; ++z) EXPECT_TRUE(congruent(c11(z), CycloElement::one(cfg.ring)));
  const UDFunction g = fn("x^2 + exp(3)");
  const CycloElement ig = riemann_sum(g, cfg);
  const BandLimited c1g = convolve(fn("1"), g, 1, cfg, ConvolutionMode::woodcock_q1);
  for (std::int64_t z = 0; z < 5; ++z) EXPECT_TRUE(congruent(c1g(z), ig));
}

TEST(Convolution, StarQOfConstants) {
  const Params s(3, 16, 3);
  const IntegralConfig cfg = s.cfg(1, 4);
  const BandLimited c = convolve(fn("1"), fn("1"), 1, cfg, ConvolutionMode::star_q);
  const PadicScalar r = bracket_ratio(s.q, 81);
  for (std::int64_t z = 0; z < 4; ++z) EXPECT_TRUE(congruent(c(z), scalar(cfg.ring, r * r)));
  const PadicScalar a2 = s.q.limit_scalar() * s.q.limit_scalar();
  EXPECT_GE((c(0) - scalar(cfg.ring, a2)).valuation_bound().lower(), Valuation(4));
}

TEST(Convolution, BandLimitedPeriodicity) {
  const Params s(3, 16, 3);
  const IntegralConfig cfg = s.cfg(2, 3);
  const BandLimited c = convolve(fn("x"), fn("x^2"), 2, cfg, ConvolutionMode::star_q);
  for (std::int64_t z = 0; z < 9; ++z) EXPECT_TRUE(congruent(c(z), c(z + 9)));
}

TEST(OtimesQ, ConstantsCancelInTheLimit) {
  const Params s(3, 20, 3);
  for (int N : {3, 5}) {
    const IntegralConfig cfg = s.cfg(1, N);
    const CycloElement r = otimes_q(fn("1"), fn("1"), 0, 1, cfg);
    EXPECT_GE(r.valuation_bound().lower(), Valuation(N)) << N;
  }
}

TEST(OtimesQ, QOneBruteForce) {
  const Params s(3, 16, 0);
  const IntegralConfig cfg = s.cfg(1, 1);
  const UDFunction g = fn("x");
  const CycloElement ig = riemann_sum(g, cfg);
  for (std::int64_t z = 0; z < 4; ++z) {
    CycloElement sum = CycloElement::zero(cfg.ring);
    for (std::int64_t x = 0; x < 3; ++x) sum += CycloElement::from_rational(cfg.ring, z - x);
    const CycloElement expect = sum / PadicScalar::from_integer(std::int64_t{3}, s.ctx) - ig;
    EXPECT_TRUE(congruent(otimes_q(fn("1"), g, z, 1, cfg), expect)) << z;
  }
}

TEST(OtimesQ, ShiftByPeriodOnlyMovesTheIntegralTerm) {
  const Params s(3, 16, 3);
  const IntegralConfig cfg = s.cfg(1, 3);
  const UDFunction f = fn("x");
  const UDFunction g = fn("x^2");
  const BandLimited star = convolve(f, g, 1, cfg, ConvolutionMode::star_q);
  for (std::int64_t z = 0; z < 3; ++z) {
    const CycloElement lhs = otimes_q(f, g, z + 3, star, cfg) - otimes_q(f, g, z, star, cfg);
    const CycloElement rhs = reflected_integral(f, g, z + 3, cfg) - reflected_integral(f, g, z, cfg);
    EXPECT_TRUE(congruent(lhs, rhs));
  }
}

TEST(Verify, Prop1GrowsWithLevel) {
  const Params s(3, 20, 3);
  Valuation last(0);
  for (int n = 1; n <= 3; ++n) {
    const IntegralConfig cfg = s.cfg(n, n);
    const VerificationReport r = verify_identity(Identity::prop1, fn("x"), fn("x"), cfg, n);
    EXPECT_GE(r.corrected.lower(), last);
    last = r.corrected.lower();
  }
  EXPECT_GE(last, Valuation(3));
}

TEST(Verify, MultiplicativityExactAtQOne) {
  const Params s(3, 16, 0);
  const VerificationReport r =
      verify_identity(Identity::mult, fn("x^2 + 1"), fn("exp(3)*x"), s.cfg(2, 2), 2);
  EXPECT_FALSE(r.literal.resolved);
  EXPECT_GE(r.literal.lower(), Valuation(10));
}

TEST(Verify, Thm2AtQOneReachesStabilization) {
  const Params s(3, 16, 0);
  const IntegralConfig cfg = s.cfg(1, 6);
  const VerificationReport r = verify_identity(Identity::thm2, fn("x"), fn("x^2"), cfg, 1);
  const IntegralResult stab = iq_limit(fn("x^2"), cfg, 6);
  EXPECT_GE(r.literal.lower(), stab.stable_digits.lower());
}

TEST(Verify, IdentityNames) {
  for (Identity id : {Identity::prop1, Identity::mult, Identity::thm2, Identity::thm3, Identity::shift,
                      Identity::closed_form}) {
    EXPECT_EQ(parse_identity(to_string(id)), id);
  }
  EXPECT_THROW(parse_identity("thm4"), DomainError);
  EXPECT_EQ(default_outer_level(2, 8), 4);
  EXPECT_EQ(default_outer_level(2, 3), 3);
}
