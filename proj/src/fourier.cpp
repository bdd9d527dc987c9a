#include "qfourier/fourier.hpp"

#include <algorithm>
#include <thread>

namespace qfourier {

std::string to_string(Twist t) { return t == Twist::plain ? "plain" : "q_inverse"; }

std::vector<CycloElement> SpectralTable::entries() const {
  std::vector<CycloElement> out;
  out.reserve(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) out.push_back(entry(i));
  return out;
}

namespace {

std::vector<Character> level_characters(std::uint32_t p, int n) {
  std::vector<Character> out;
  const std::int64_t order = prime_power(p, n).get_si();
  out.reserve(static_cast<std::size_t>(order));
  for (std::int64_t k = 0; k < order; ++k) out.emplace_back(p, n, k);
  return out;
}

// Exponent of zeta_{p^L} for w^x, w of level n <= L.
std::int64_t char_shift(const Character& w, std::int64_t x, const CycloRing& ring) {
  const std::int64_t order = w.order();
  const std::int64_t r = ((x % order) + order) % order;
  return r * w.exponent() % order * (ring.order() / order);
}

void require_ring_level(const IntegralConfig& cfg, int level) {
  if (cfg.ring->level() < level) {
    throw DomainError("value ring level " + std::to_string(cfg.ring->level()) +
                      " is below the required level " + std::to_string(level));
  }
}

// Same ring at level >= `level`.
IntegralConfig lifted(const IntegralConfig& cfg, int level) {
  if (cfg.ring->level() >= level) return cfg;
  return cfg.with_ring(make_ring(cfg.context(), level));
}

SpectralTable transform_bound(const BoundFunction& f, int n, const IntegralConfig& cfg, Twist twist) {
  cfg.validate();
  if (n < 0) throw DomainError("character level must be >= 0");
  if (cfg.N < n) throw DomainError("integral level N must be >= the character level n");
  require_ring_level(cfg, n);
  SpectralTable t;
  t.n = n;
  t.N = cfg.N;
  t.twist = twist;
  t.ring = cfg.ring;
  t.characters = level_characters(cfg.p(), n);
  const std::size_t k = t.characters.size();
  const bool weighted = twist == Twist::plain && !cfg.q.is_one();
  const std::int64_t m = cfg.modulus();
  const int threads = static_cast<int>(std::min<std::int64_t>(cfg.threads, m));

  std::vector<std::vector<CyclicAccumulator>> parts(
      static_cast<std::size_t>(threads), std::vector<CyclicAccumulator>(k, CyclicAccumulator(cfg.ring)));
  auto body = [&](std::vector<CyclicAccumulator>& acc, std::int64_t a, std::int64_t b) {
    PadicScalar w = weighted ? cfg.q.q().pow(a) : PadicScalar();
    for (std::int64_t x = a; x < b; ++x) {
      BoundFunction::Sample s = f.sample(x);
      if (weighted) {
        if (s.general) {
          s.g = w * s.g;
        } else {
          s.s *= w;
        }
        w *= cfg.q.q();
      }
      for (std::size_t i = 0; i < k; ++i) {
        BoundFunction::accumulate(acc[i], s, char_shift(t.characters[i], x, *cfg.ring));
      }
    }
  };
  if (threads == 1) {
    body(parts[0], 0, m);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back([&, i] {
        try {
          body(parts[static_cast<std::size_t>(i)], m * i / threads, m * (i + 1) / threads);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  t.sums.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    CycloElement s = parts[0][i].result();
    for (std::size_t j = 1; j < parts.size(); ++j) s += parts[j][i].result();
    t.sums.push_back(std::move(s));
  }
  t.normalizer = total_mass(cfg);
  return t;
}

// Twisted transforms of a band-limited function at level `level`.
std::vector<CycloElement> transform_band_limited(const BandLimited& h, int level,
                                                 const IntegralConfig& cfg) {
  const IntegralConfig c = cfg.at_level(level);
  c.validate();
  const std::int64_t m = c.modulus();
  std::vector<CycloElement> values;
  values.reserve(static_cast<std::size_t>(m));
  for (std::int64_t x = 0; x < m; ++x) values.push_back(h(x));
  const PadicScalar mass = total_mass(c);
  std::vector<CycloElement> out;
  for (const Character& w : h.characters) {
    CyclicAccumulator acc(c.ring);
    for (std::int64_t x = 0; x < m; ++x) acc.add_shifted(values[static_cast<std::size_t>(x)], char_shift(w, x, *c.ring));
    out.push_back(acc.result() / mass);
  }
  return out;
}

ValuationBound min_bound(const ValuationBound& a, const ValuationBound& b) {
  return b.value < a.value ? b : a;
}

ValuationBound worst(const std::vector<CycloElement>& residuals) {
  ValuationBound r = ValuationBound::at_least(Valuation::infinity());
  for (const auto& e : residuals) r = min_bound(r, e.valuation_bound());
  return r;
}

}  // namespace

SpectralTable iq_transform(const UDFunction& f, int n, const IntegralConfig& cfg, Twist twist) {
  return transform_bound(BoundFunction(f, cfg.ring, cfg.q), n, cfg, twist);
}

CycloElement inverse_finite(const SpectralTable& tbl, std::int64_t x) {
  if (tbl.N != tbl.n) throw DomainError("finite inversion needs the table at matched levels N = n");
  CyclicAccumulator acc(tbl.ring);
  for (std::size_t i = 0; i < tbl.size(); ++i) {
    acc.add_shifted(tbl.sums[i], -char_shift(tbl.characters[i], x, *tbl.ring));
  }
  return acc.result() / tbl.normalizer;
}

IntegralResult inverse_limit(const UDFunction& f, std::int64_t x, int n_max, const IntegralConfig& cfg) {
  if (cfg.q.is_one()) throw DomainError("inverse_limit needs q != 1");
  if (n_max < 2) throw DomainError("need at least two levels to measure stabilization");
  const IntegralConfig top = lifted(cfg, std::max(n_max, f.max_char_level()));
  const BoundFunction bound(f, top.ring, top.q);
  IntegralResult r;
  CycloElement prev;
  for (int n = 1; n <= n_max; ++n) {
    const SpectralTable t = transform_bound(bound, n, top.at_level(n), Twist::plain);
    CycloElement v = top.q.inverse_limit_scalar() * inverse_finite(t, x);
    if (n > 1) r.history.push_back((v - prev).valuation_bound());
    prev = std::move(v);
  }
  r.value = prev;
  r.level = n_max;
  r.stable_digits = r.history.back();
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    if (r.history[i].resolved && r.history[i].value < r.history[i - 1].value) r.converged = false;
  }
  return r;
}

CycloElement BandLimited::operator()(std::int64_t x) const {
  CyclicAccumulator acc(ring);
  for (std::size_t i = 0; i < characters.size(); ++i) {
    acc.add_shifted(coeffs[i], -char_shift(characters[i], x, *ring));
  }
  return acc.result();
}

namespace {

BandLimited convolve_bound(const BoundFunction& f, const BoundFunction& g, int n,
                           const IntegralConfig& cfg, Twist twist) {
  const SpectralTable tf = transform_bound(f, n, cfg, twist);
  const SpectralTable tg = transform_bound(g, n, cfg, twist);
  BandLimited h;
  h.n = n;
  h.ring = cfg.ring;
  h.characters = tf.characters;
  for (std::size_t i = 0; i < tf.size(); ++i) h.coeffs.push_back(tf.entry(i) * tg.entry(i));
  return h;
}

// sum_{x < p^N} f(x) g(z - x) / [p^N]
CycloElement reflected_average(const BoundFunction& fg, const IntegralConfig& cfg) {
  return weighted_sum(fg, cfg, false) / total_mass(cfg);
}

}  // namespace

BandLimited convolve(const UDFunction& f, const UDFunction& g, int n, const IntegralConfig& cfg,
                     ConvolutionMode mode) {
  if (mode == ConvolutionMode::woodcock_q1 && !cfg.q.is_one()) {
    throw DomainError("the q = 1 convolution needs q = 1");
  }
  const Twist twist = mode == ConvolutionMode::star_q ? Twist::q_inverse : Twist::plain;
  return convolve_bound(BoundFunction(f, cfg.ring, cfg.q), BoundFunction(g, cfg.ring, cfg.q), n, cfg,
                        twist);
}

CycloElement reflected_integral(const UDFunction& f, const UDFunction& g, std::int64_t z,
                                const IntegralConfig& cfg) {
  const BoundFunction fg(f * reflect(g, z), cfg.ring, cfg.q);
  return cfg.q.limit_scalar() * reflected_average(fg, cfg);
}

CycloElement otimes_q(const UDFunction& f, const UDFunction& g, std::int64_t z,
                      const BandLimited& star, const IntegralConfig& cfg) {
  return reflected_integral(f, g, z, cfg) - star(z);
}

CycloElement otimes_q(const UDFunction& f, const UDFunction& g, std::int64_t z, int n,
                      const IntegralConfig& cfg) {
  return otimes_q(f, g, z, convolve(f, g, n, cfg, ConvolutionMode::star_q), cfg);
}

// ---------------------------------------------------------------------------
// Verification

std::string to_string(Identity id) {
  switch (id) {
    case Identity::prop1:
      return "prop1";
    case Identity::mult:
      return "mult";
    case Identity::thm2:
      return "thm2";
    case Identity::thm3:
      return "thm3";
    case Identity::shift:
      return "shift";
    case Identity::closed_form:
      return "closed_form";
  }
  return "?";
}

Identity parse_identity(const std::string& name) {
  for (Identity id : {Identity::prop1, Identity::mult, Identity::thm2, Identity::thm3, Identity::shift,
                      Identity::closed_form}) {
    if (to_string(id) == name) return id;
  }
  throw DomainError("unknown identity '" + name + "'");
}

namespace {

struct ClosedFormParams {
  mpq_class t = 0;
  std::optional<Character> xi;
};

bool closed_form_factor(const UDFunction::Node& n, ClosedFormParams& out) {
  if (const auto* e = std::get_if<UDFunction::ExpT>(&n.kind)) {
    out.t += e->t;
    return true;
  }
  if (const auto* c = std::get_if<UDFunction::Char>(&n.kind)) {
    out.xi = out.xi ? *out.xi * c->w : c->w;
    return true;
  }
  if (const auto* pr = std::get_if<UDFunction::Product>(&n.kind)) {
    return closed_form_factor(*pr->lhs, out) && closed_form_factor(*pr->rhs, out);
  }
  return false;
}

VerificationReport report(Identity id, const IntegralConfig& cfg, int n) {
  VerificationReport r;
  r.identity = id;
  r.n = n;
  r.N = cfg.N;
  return r;
}

}  // namespace

int default_outer_level(int n, int N) { return std::min(N, n + 2); }

VerificationReport verify_identity(Identity id, const UDFunction& f, const UDFunction& g,
                                   const IntegralConfig& cfg_in, int n, int outer_level) {
  const int top = std::max({n, f.max_char_level(), g.max_char_level()});
  const IntegralConfig cfg = lifted(cfg_in, top);
  cfg.validate();
  const PrimeContext& ctx = cfg.context();
  const PadicScalar& A = cfg.q.limit_scalar();
  const BoundFunction bf(f, cfg.ring, cfg.q);
  const BoundFunction bg(g, cfg.ring, cfg.q);
  const std::int64_t pn = prime_power(cfg.p(), n).get_si();
  VerificationReport r = report(id, cfg, n);

  switch (id) {
    case Identity::prop1: {
      r.N = n;
      const SpectralTable t = transform_bound(bf, n, cfg.at_level(n), Twist::plain);
      std::vector<CycloElement> res;
      for (std::int64_t x = 0; x < pn; ++x) {
        const CycloElement lhs = cfg.q.inverse_limit_scalar() * inverse_finite(t, x);
        res.push_back(lhs - q_power(cfg.q, x) * bf(x));
      }
      r.literal = r.corrected = worst(res);
      break;
    }
    case Identity::mult: {
      const BandLimited h = convolve_bound(bf, bg, n, cfg, Twist::q_inverse);
      const std::vector<CycloElement> th = transform_band_limited(h, n, cfg);
      std::vector<CycloElement> lit, cor;
      for (std::size_t i = 0; i < th.size(); ++i) {
        lit.push_back(th[i] - h.coeffs[i]);
        cor.push_back(th[i] - A * h.coeffs[i]);
      }
      r.literal = worst(lit);
      r.corrected = worst(cor);
      if (!cfg.q.is_one() && h.coeffs[0].valuation_bound().resolved) {
        const CycloElement ratio = th[0] / h.coeffs[0];
        r.ratio = (ratio - CycloElement::from_scalar(cfg.ring, A)).valuation_bound();
        r.note = "ratio at w = 1 compared with (q-1)/log q";
      }
      break;
    }
    case Identity::thm2: {
      const IntegralConfig c1 = cfg.with_q(QConfig::one(ctx));
      const BandLimited star = convolve_bound(bf, bg, n, cfg, Twist::q_inverse);
      const BandLimited wood = convolve_bound(bf, bg, n, c1, Twist::plain);
      const PadicScalar A2 = A * A;
      std::vector<CycloElement> res;
      for (std::int64_t z = 0; z < pn; ++z) {
        const BoundFunction fg(f * reflect(g, z), cfg.ring, cfg.q);
        const CycloElement avg_q = reflected_average(fg, cfg);
        const CycloElement avg_1 = reflected_average(fg, c1);
        const CycloElement otimes = A2 * (avg_1 - wood(z));
        res.push_back(star(z) - (A * avg_q - otimes));
      }
      r.literal = r.corrected = worst(res);
      r.note = "(x)_q taken as (q-1)^2/log^2 q times the q = 1 rearrangement";
      break;
    }
    case Identity::thm3: {
      // Two stacked divisions (inner level N, outer level m) cost N + m digits;
      // the computation carries them as guard digits and the report is capped at M.
      r.outer_level = outer_level > 0 ? outer_level : default_outer_level(n, cfg.N);
      const int M = ctx.precision();
      const PrimeContext wide = ctx.with_precision(M + cfg.N + r.outer_level);
      const IntegralConfig cw(cfg.q.with_precision(M + cfg.N + r.outer_level),
                              make_ring(wide, cfg.ring->level()), cfg.N, cfg.l, cfg.threads);
      const PadicScalar& Aw = cw.q.limit_scalar();
      const BoundFunction wf(f, cw.ring, cw.q);
      const BoundFunction wg(g, cw.ring, cw.q);
      const IntegralConfig outer = cw.at_level(r.outer_level);
      outer.validate();
      const std::int64_t zs = outer.modulus();
      const BandLimited star = convolve_bound(wf, wg, n, cw, Twist::q_inverse);
      const PadicScalar outer_mass = total_mass(outer);
      CyclicAccumulator lhs_acc(cw.ring), first_acc(cw.ring);
      for (std::int64_t z = 0; z < zs; ++z) {
        const BoundFunction fg(f * reflect(g, z), cw.ring, cw.q);
        const CycloElement inner = Aw * reflected_average(fg, cw);
        lhs_acc.add(inner - star(z));
        first_acc.add(inner);
      }
      const CycloElement lhs = lhs_acc.result() / outer_mass;
      const CycloElement first = first_acc.result() / outer_mass;
      const SpectralTable tf = transform_bound(wf, 0, cw, Twist::q_inverse);
      const SpectralTable tg = transform_bound(wg, 0, cw, Twist::q_inverse);
      const CycloElement product = tf.entry(0) * tg.entry(0);
      r.literal = (lhs - (first - product)).valuation_bound().capped(Valuation(M));
      r.corrected = (lhs - (first - Aw * product)).valuation_bound().capped(Valuation(M));
      r.note = "f (x) g' read as the q-convolution (x)_q";
      break;
    }
    case Identity::shift: {
      r.literal = r.corrected = shift_identity_residual(f, cfg).valuation_bound();
      break;
    }
    case Identity::closed_form: {
      ClosedFormParams cp;
      if (!closed_form_factor(f.root(), cp)) {
        throw DomainError("closed_form needs f = exp(t)*chi(k), exp(t) or chi(k)");
      }
      const Character xi = cp.xi.value_or(Character(cfg.p(), 0, 0));
      const ClosedForm cf = laplace_closed_form(PadicScalar::from_rational(cp.t, ctx), xi, cfg);
      const CycloElement value = riemann_sum(bf, cfg);
      r.literal = (value - cf.literal).valuation_bound();
      r.corrected = (value - cf.normalized).valuation_bound();
      r.ratio = (value / cf.literal - CycloElement::from_scalar(cfg.ring, A)).valuation_bound();
      r.note = "literal value lacks the factor (q-1)/log q";
      break;
    }
  }
  return r;
}

}  // namespace qfourier
