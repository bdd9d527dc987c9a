// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfourier/cli.hpp"
#include "qfourier/fourier.hpp"

using namespace qfourier;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

UDFunction fn(const std::string& s, std::uint32_t p, int level = 1) {
  return parse_fn(s, FunctionEnv{p, level});
}

ValuationBound residual(const CycloElement& a, const CycloElement& b) { return (a - b).valuation_bound(); }

std::int64_t ipow(std::int64_t p, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "qfourier");
  std::ostringstream out, err;
  code = run_command(args, out, err);
  return out.str();
}

// C1
void mass_normalization(Outcome& o) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p, 16);
    const RingPtr ring = make_ring(ctx, 0);
    for (const mpq_class off : {mpq_class(0), mpq_class(p), mpq_class(p * p)}) {
      const QConfig q = QConfig::from_offset(off, ctx);
      for (int N = 1; N <= 8; ++N) {
        const CycloElement v = riemann_sum(fn("1", p), IntegralConfig(q, ring, N));
        const CycloElement d = v - CycloElement::one(ring);
        o.require(d.is_zero() && v.precision() >= 16 - N,
                  "p=" + std::to_string(p) + " q-1=" + off.get_str() + " N=" + std::to_string(N));
      }
    }
  }
}

// C2
void bernoulli_moments(Outcome& o) {
  const std::pair<std::uint32_t, int> cases[] = {{3, 10}, {5, 7}, {7, 6}};
  for (auto [p, N] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const PrimeContext ctx(p, 20);
    const IntegralConfig cfg(QConfig::one(ctx), make_ring(ctx, 0), N);
    Valuation worst = Valuation::infinity();
    for (int m = 0; m <= 10; ++m) {
      const IntegralResult r = iq_limit(UDFunction::identity().pow(static_cast<unsigned>(m)), cfg, N);
      const ValuationBound d = residual(r.value, CycloElement::from_rational(cfg.ring, bernoulli_exact(m)));
      worst = std::min(worst, d.lower());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail << " p=" << p << ":" << worst.to_string() << "d/" << static_cast<int>(secs * 1000) << "ms";
    o.require(worst >= Valuation(5), "agreement at p=" + std::to_string(p));
    o.require(secs < 60, "runtime at p=" + std::to_string(p));
  }
}

// C3
void shift_identity(Outcome& o) {
  const std::pair<std::uint32_t, int> cases[] = {{3, 10}, {5, 7}, {7, 6}};
  for (auto [p, N] : cases) {
    const PrimeContext ctx(p, 20);
    const IntegralConfig cfg(QConfig::from_offset(p, ctx), make_ring(ctx, 0), N);
    const std::string ps = std::to_string(p);
    Valuation worst = Valuation::infinity();
    for (const std::string& f : std::vector<std::string>{"x", "x^2", "exp(" + ps + ")", "qbr*x"}) {
      worst = std::min(worst, shift_identity_residual(fn(f, p), cfg).valuation_bound().lower());
    }
    o.detail << " p=" << p << ":" << worst.to_string();
    o.require(worst >= Valuation(5), "residual at p=" + ps);
    o.require(shift_identity_residual(fn("1", p), cfg).is_zero(), "f=1 not exact at p=" + ps);
    o.require(shift_identity_residual(fn("x", p), cfg).is_zero(), "f=x not exact at p=" + ps);
  }
}

// C4
void finite_inversion(Outcome& o) {
  const int M = 16;
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeContext ctx(p, M);
    const QConfig q = QConfig::from_offset(p, ctx);
    const FunctionEnv env{p, 1};
    const auto corpus = random_functions(2024 + p, 20, env);
    for (int n : {1, 2}) {
      const RingPtr ring = make_ring(ctx, n);
      const IntegralConfig cfg(q, ring, n);
      const std::int64_t pn = ipow(p, n);
      const PadicScalar scale = PadicScalar::from_integer(pn, ctx) / q_bracket(pn, q);
      Valuation worst = Valuation::infinity();
      for (const auto& src : corpus) {
        const UDFunction f = parse_fn(src, env);
        const SpectralTable t = iq_transform(f, n, cfg);
        const BoundFunction bf(f, ring, q);
        for (std::int64_t x = 0; x < pn; ++x) {
          const CycloElement target = scale * (q_power(q, x) * bf(x));
          worst = std::min(worst, residual(inverse_finite(t, x), target).lower());
        }
      }
      o.detail << " p=" << p << ",n=" << n << ":" << worst.to_string();
      o.require(worst >= Valuation(M - n), "p=" + std::to_string(p) + " n=" + std::to_string(n));
    }
  }
}

// C5
void prop1_limit(Outcome& o) {
  const PrimeContext ctx(3, 20);
  const QConfig q = QConfig::from_offset(3, ctx);
  for (const std::string src : {"x", "x^2", "chi(1)*x"}) {
    Valuation last(-1000);
    bool monotone = true;
    o.detail << " " << src << ":";
    for (int n = 1; n <= 4; ++n) {
      const IntegralConfig cfg(q, make_ring(ctx, n), n);
      const UDFunction f = fn(src, 3);
      const VerificationReport r = verify_identity(Identity::prop1, f, f, cfg, n);
      o.detail << r.corrected.to_string() << (n < 4 ? "," : "");
      monotone = monotone && r.corrected.lower() >= last;
      last = r.corrected.lower();
    }
    o.require(monotone, src + " not non-decreasing");
    o.require(last >= Valuation(3), src + " below 3 at n=4");
  }
}

// C6
void scalar_limit(Outcome& o) {
  const PrimeContext ctx(3, 24);
  const QConfig q = QConfig::from_offset(3, ctx);
  int last = -1000;
  for (int n = 1; n <= 6; ++n) {
    const std::int64_t pn = ipow(3, n);
    const PadicScalar d = PadicScalar::from_integer(pn, ctx) / q_bracket(pn, q) - q.limit_scalar();
    const int v = d.is_zero() ? d.precision() : d.valuation();
    o.detail << (n == 1 ? " " : ",") << v;
    o.require(v >= last + 1, "no growth at n=" + std::to_string(n));
    last = v;
  }
}

// C7
void closed_form(Outcome& o) {
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeContext ctx(p, 20);
    const QConfig q = QConfig::from_offset(p, ctx);
    const int N = p == 3 ? 7 : 5;
    const IntegralConfig cfg(q, make_ring(ctx, 1), N);
    for (std::int64_t tm : {1, 2}) {
      for (std::int64_t k : {0, 1}) {
        const Character xi(p, 1, k);
        const mpq_class t(static_cast<long>(tm * p));
        const UDFunction f = UDFunction::exp_t(t, p) * UDFunction::character(xi);
        const CycloElement integral = riemann_sum(f, cfg);
        const ClosedForm cf = laplace_closed_form(PadicScalar::from_rational(t, ctx), xi, cfg);
        const Valuation vn = residual(integral, cf.normalized).lower();
        const CycloElement factor = integral / cf.literal;
        const Valuation vf = residual(factor, CycloElement::from_scalar(cfg.ring, q.limit_scalar())).lower();
        o.detail << " p=" << p << ",t=" << t.get_str() << ",k=" << k << ":" << vn.to_string() << "/"
                 << vf.to_string();
        o.require(vn >= Valuation(4), "normalized mismatch");
        o.require(vf >= Valuation(4), "factor mismatch");
      }
    }
  }
}

// C8
void multiplicativity(Outcome& o) {
  const PrimeContext ctx(3, 16);
  const FunctionEnv env{3, 1};
  const auto fs = random_functions(88, 10, env);
  const auto gs = random_functions(89, 10, env);
  const QConfig one = QConfig::one(ctx);
  bool exact = true;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const IntegralConfig cfg(one, make_ring(ctx, 2), 2);
    const VerificationReport r =
        verify_identity(Identity::mult, parse_fn(fs[i], env), parse_fn(gs[i], env), cfg, 2);
    exact = exact && !r.literal.resolved && r.literal.lower() >= Valuation(10);
  }
  o.detail << " q=1 exact:" << (exact ? "yes" : "no");
  o.require(exact, "q=1 residual not zero");
  const IntegralConfig cfg(QConfig::from_offset(3, ctx), make_ring(ctx, 3), 4);
  const VerificationReport r = verify_identity(Identity::mult, fn("x", 3), fn("x^2", 3), cfg, 3);
  o.require(r.ratio.has_value(), "ratio missing");
  if (r.ratio) {
    o.detail << " ratio vs (q-1)/log q:" << r.ratio->to_string();
    o.require(r.ratio->lower() >= Valuation(4), "ratio below 4 digits");
  }
}

// C9
void convolution_identity(Outcome& o) {
  const PrimeContext ctx(3, 16);
  const IntegralConfig cfg(QConfig::from_offset(3, ctx), make_ring(ctx, 2), 8);
  const std::pair<const char*, const char*> pairs[] = {{"x", "x"}, {"x", "x^2"}, {"chi(1)", "x"}};
  for (auto [f, g] : pairs) {
    const VerificationReport r = verify_identity(Identity::thm2, fn(f, 3), fn(g, 3), cfg, 2);
    o.detail << " (" << f << "," << g << "):" << r.literal.to_string();
    o.require(r.literal.lower() >= Valuation(4), std::string(f) + "," + g);
  }
  const PrimeContext wide(3, 20);
  Valuation last(-1000);
  o.detail << " k=1..4:";
  for (int k = 1; k <= 4; ++k) {
    const QConfig q = QConfig::from_offset(mpq_class(static_cast<long>(ipow(3, k))), wide);
    const IntegralConfig c(q, make_ring(wide, 2), 3);
    const VerificationReport r = verify_identity(Identity::thm2, fn("x", 3), fn("x^2", 3), c, 2);
    o.detail << r.literal.to_string() << (k < 4 ? "," : "");
    o.require(r.literal.lower() > last, "no growth at k=" + std::to_string(k));
    last = r.literal.lower();
  }
}

// C10
void product_identity(Outcome& o) {
  const PrimeContext ctx(3, 16);
  const IntegralConfig cfg(QConfig::from_offset(3, ctx), make_ring(ctx, 2), 8);
  const std::pair<const char*, const char*> pairs[] = {{"x", "x"}, {"x", "x^2"}, {"chi(1)", "x"}};
  for (auto [f, g] : pairs) {
    const VerificationReport r = verify_identity(Identity::thm3, fn(f, 3), fn(g, 3), cfg, 2);
    o.detail << " (" << f << "," << g << "):" << r.corrected.to_string() << " literal "
             << r.literal.to_string();
    o.require(r.corrected.lower() >= Valuation(3), std::string(f) + "," + g);
  }
}

// Values agree to the coarser precision.
bool truncation_matches(const CycloElement& coarse, const CycloElement& fine) {
  if (coarse.coeffs().size() != fine.coeffs().size()) return false;
  for (std::size_t i = 0; i < coarse.coeffs().size(); ++i) {
    const PadicScalar& c = coarse.coeffs()[i];
    if (fine.coeffs()[i].precision() < c.precision()) return false;
    if (!(fine.coeffs()[i].truncated(c.precision()) == c.truncated(c.precision()))) return false;
  }
  return true;
}

bool sound(const ValuationBound& coarse, const ValuationBound& fine) {
  if (coarse.resolved) return fine == coarse;
  return fine.lower() >= coarse.lower();
}

// C11
void determinism(Outcome& o) {
  const std::vector<std::string> suite = {"verify", "--suite", "prop1,mult,thm2,thm3,shift,closed_form",
                                          "--f", "chi(1)*exp(3)", "--g", "x^2", "--q", "3/1", "--N", "6"};
  int c1 = 0;
  int c2 = 0;
  const std::string a = run_cli(suite, c1);
  const std::string b = run_cli(suite, c2);
  o.require(c1 == c2 && a == b && !a.empty(), "verify output differs between runs");
  o.detail << " rerun bytes " << (a == b ? "identical" : "differ");

  const int M = 16;
  int checked = 0;
  bool values_ok = true;
  bool bounds_ok = true;
  const PrimeContext lo(3, M);
  const PrimeContext hi(3, M + 4);
  const QConfig ql = QConfig::from_offset(3, lo);
  const QConfig qh = QConfig::from_offset(3, hi);
  for (const std::string src : {"x^3 + chi(1)*exp(3)", "qbr*x", "shift(x^2, 2) - 1/7"}) {
    const UDFunction f = fn(src, 3);
    const IntegralResult rl = iq_limit(f, IntegralConfig(ql, make_ring(lo, 1), 6), 6);
    const IntegralResult rh = iq_limit(f, IntegralConfig(qh, make_ring(hi, 1), 6), 6);
    values_ok = values_ok && truncation_matches(rl.value, rh.value);
    const SpectralTable tl = iq_transform(f, 1, IntegralConfig(ql, make_ring(lo, 1), 4));
    const SpectralTable th = iq_transform(f, 1, IntegralConfig(qh, make_ring(hi, 1), 4));
    for (std::size_t i = 0; i < tl.size(); ++i) {
      values_ok = values_ok && truncation_matches(tl.entry(i), th.entry(i));
    }
    checked += 1 + static_cast<int>(tl.size());
    for (Identity id : {Identity::prop1, Identity::mult, Identity::thm2, Identity::thm3, Identity::shift}) {
      const VerificationReport vl =
          verify_identity(id, f, fn("x^2", 3), IntegralConfig(ql, make_ring(lo, 2), 5), 2);
      const VerificationReport vh =
          verify_identity(id, f, fn("x^2", 3), IntegralConfig(qh, make_ring(hi, 2), 5), 2);
      bounds_ok = bounds_ok && sound(vl.literal, vh.literal) && sound(vl.corrected, vh.corrected);
      ++checked;
    }
  }
  for (int m = 0; m <= 10; ++m) {
    const UDFunction f = UDFunction::identity().pow(static_cast<unsigned>(m));
    const CycloElement l = riemann_sum(f, IntegralConfig(QConfig::one(lo), make_ring(lo, 0), 6));
    const CycloElement h = riemann_sum(f, IntegralConfig(QConfig::one(hi), make_ring(hi, 0), 6));
    values_ok = values_ok && truncation_matches(l, h);
    ++checked;
  }
  o.detail << "; M vs M+4: " << checked << " outputs, values " << (values_ok ? "match" : "differ")
           << ", residual bounds " << (bounds_ok ? "consistent" : "inconsistent");
  o.require(values_ok, "values at M+4 truncated to M differ");
  o.require(bounds_ok, "residual valuations inconsistent between M and M+4");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"C1 mass normalization", mass_normalization},
      {"C2 Bernoulli moments", bernoulli_moments},
      {"C3 shift identity", shift_identity},
      {"C4 finite inversion", finite_inversion},
      {"C5 inversion limit", prop1_limit},
      {"C6 scalar limit", scalar_limit},
      {"C7 exponential-character closed form", closed_form},
      {"C8 multiplicativity", multiplicativity},
      {"C9 convolution identity (x)_q", convolution_identity},
      {"C10 corrected product identity", product_identity},
      {"C11 determinism and precision soundness", determinism},
  };
  const double limits[] = {1, 180, 60, 10, 30, 5, 60, 60, 120, 120, 120};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limits[i]) {
      o.pass = false;
      o.detail << " [fail: runtime over " << limits[i] << " s]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << criteria[i].first << " (" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s):" << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
