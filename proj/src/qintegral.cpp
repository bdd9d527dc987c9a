#include "qfourier/qintegral.hpp"

#include <numeric>
#include <thread>

namespace qfourier {

IntegralConfig::IntegralConfig(QConfig q_, RingPtr ring_, int N_, std::int64_t l_, int threads_)
    : q(std::move(q_)), ring(std::move(ring_)), N(N_), l(l_), threads(threads_) {}

std::int64_t IntegralConfig::modulus() const {
  const mpz_class m = prime_power(p(), N) * l;
  if (!m.fits_slong_p() || m > (std::int64_t{1} << 40)) throw DomainError("level too large for a direct sum");
  return m.get_si();
}

IntegralConfig IntegralConfig::at_level(int level) const {
  IntegralConfig c = *this;
  c.N = level;
  return c;
}

IntegralConfig IntegralConfig::with_q(QConfig other) const {
  IntegralConfig c = *this;
  c.q = std::move(other);
  return c;
}

IntegralConfig IntegralConfig::with_ring(RingPtr other) const {
  IntegralConfig c = *this;
  c.ring = std::move(other);
  return c;
}

void IntegralConfig::validate() const {
  if (!ring) throw DomainError("integral config without a value ring");
  if (ring->p() != p()) throw DomainError("ring and q over different primes");
  if (N < 1) throw DomainError("level N must be >= 1");
  if (l < 1) throw DomainError("l must be positive");
  if (l > 1 && std::gcd(l, static_cast<std::int64_t>(p())) != 1) {
    throw DomainError("l must be coprime to p");
  }
  if (context().precision() <= N) {
    throw DomainError("precision M = " + std::to_string(context().precision()) +
                      " must exceed the level N = " + std::to_string(N));
  }
  if (threads < 1) throw DomainError("threads must be >= 1");
}

PadicScalar total_mass(const IntegralConfig& cfg) {
  const std::int64_t m = cfg.modulus();
  if (cfg.q.is_one()) return PadicScalar::from_integer(m, cfg.context());
  return q_bracket(m, cfg.q);
}

namespace {

// Splits [0, m) into cfg.threads contiguous chunks and sums the partial
// accumulators in chunk order.
template <class Body>
CycloElement chunked_sum(const IntegralConfig& cfg, Body body) {
  const std::int64_t m = cfg.modulus();
  const int t = static_cast<int>(std::min<std::int64_t>(cfg.threads, m));
  std::vector<CyclicAccumulator> parts(static_cast<std::size_t>(t), CyclicAccumulator(cfg.ring));
  auto range = [&](int i) {
    return std::pair<std::int64_t, std::int64_t>{m * i / t, m * (i + 1) / t};
  };
  if (t == 1) {
    body(parts[0], 0, m);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) {
      pool.emplace_back([&, i] {
        try {
          auto [a, b] = range(i);
          body(parts[static_cast<std::size_t>(i)], a, b);
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
  CycloElement total = parts[0].result();
  for (std::size_t i = 1; i < parts.size(); ++i) total += parts[i].result();
  return total;
}

// sum_{x < m} q^x, one term at a time, in residues modulo p^A.
PadicScalar geometric_sum(const PadicScalar& q, std::int64_t m) {
  const std::uint32_t p = q.prime();
  const int A = q.precision();
  const mpz_class& mod = prime_power(p, A);
  const mpz_class r = q.residue() % mod;
  if (mod.fits_slong_p() && mod < (mpz_class(1) << 62)) {
    const auto n = static_cast<unsigned __int128>(mod.get_si());
    const auto rq = static_cast<unsigned __int128>(r.get_si());
    unsigned __int128 w = 1;
    unsigned __int128 sum = 0;
    for (std::int64_t x = 0; x < m; ++x) {
      sum += w;
      if (sum >= n) sum -= n;
      w = w * rq % n;
    }
    return PadicScalar::from_residue(mpz_class(static_cast<long>(sum)), p, A);
  }
  mpz_class w = 1;
  mpz_class sum = 0;
  for (std::int64_t x = 0; x < m; ++x) {
    sum += w;
    if (sum >= mod) sum -= mod;
    w *= r;
    mpz_fdiv_r(w.get_mpz_t(), w.get_mpz_t(), mod.get_mpz_t());
  }
  return PadicScalar::from_residue(sum, p, A);
}

}  // namespace

PadicScalar measure_ball(std::int64_t a, const IntegralConfig& cfg) {
  cfg.validate();
  if (a < 0 || a >= cfg.modulus()) throw DomainError("ball index out of range");
  return q_power(cfg.q, a) / total_mass(cfg);
}

CycloElement weighted_sum(const BoundFunction& f, const IntegralConfig& cfg, bool q_weights,
                          const std::function<std::int64_t(std::int64_t)>& shift) {
  cfg.validate();
  const bool weighted = q_weights && !cfg.q.is_one();
  if (!shift && std::holds_alternative<UDFunction::Const>(f.function().root().kind)) {
    const PadicScalar c = f.sample(0).s;
    const PadicScalar total =
        weighted ? c * geometric_sum(cfg.q.q(), cfg.modulus()) : c.mul_integer(cfg.modulus());
    return CycloElement::from_scalar(cfg.ring, total);
  }
  return chunked_sum(cfg, [&](CyclicAccumulator& acc, std::int64_t a, std::int64_t b) {
    PadicScalar w = weighted ? cfg.q.q().pow(a) : PadicScalar();
    for (std::int64_t x = a; x < b; ++x) {
      const std::int64_t e = shift ? shift(x) : 0;
      const BoundFunction::Sample s = f.sample(x);
      if (weighted) {
        BoundFunction::accumulate(acc, s, w, e);
        w *= cfg.q.q();
      } else {
        BoundFunction::accumulate(acc, s, e);
      }
    }
  });
}

CycloElement riemann_sum(const BoundFunction& f, const IntegralConfig& cfg) {
  return weighted_sum(f, cfg, true) / total_mass(cfg);
}

CycloElement riemann_sum(const UDFunction& f, const IntegralConfig& cfg) {
  cfg.validate();
  return riemann_sum(BoundFunction(f, cfg.ring, cfg.q), cfg);
}

CycloElement riemann_sum(const PointFunction& f, const IntegralConfig& cfg) {
  cfg.validate();
  const bool weighted = !cfg.q.is_one();
  const CycloElement s =
      chunked_sum(cfg, [&](CyclicAccumulator& acc, std::int64_t a, std::int64_t b) {
        PadicScalar w = weighted ? cfg.q.q().pow(a) : PadicScalar();
        for (std::int64_t x = a; x < b; ++x) {
          if (weighted) {
            acc.add(w * f(x));
            w *= cfg.q.q();
          } else {
            acc.add(f(x));
          }
        }
      });
  return s / total_mass(cfg);
}

IntegralResult iq_limit(const UDFunction& f, const IntegralConfig& cfg, int N_max, int first_level) {
  if (first_level < 1) throw DomainError("levels start at 1");
  if (N_max < first_level + 1) throw DomainError("need at least two levels to measure stabilization");
  const BoundFunction bound(f, cfg.ring, cfg.q);
  IntegralResult r;
  CycloElement prev;
  for (int n = first_level; n <= N_max; ++n) {
    const IntegralConfig c = cfg.at_level(n);
    c.validate();
    CycloElement v = riemann_sum(bound, c);
    if (n > first_level) r.history.push_back((v - prev).valuation_bound());
    prev = std::move(v);
  }
  r.value = prev;
  r.level = N_max;
  r.stable_digits = r.history.back();
  // Stabilization must not decrease; an unresolved bound counts as at least its value.
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    const auto& a = r.history[i - 1];
    const auto& b = r.history[i];
    if (b.resolved && b.value < a.value) r.converged = false;
  }
  return r;
}

CycloElement shift_identity_residual(const UDFunction& f, const IntegralConfig& cfg) {
  const IntegralConfig c0 = cfg.with_q(QConfig::one(cfg.context()));
  c0.validate();
  const BoundFunction g(f, cfg.ring, cfg.q);
  const BoundFunction g1(shift(f, 1), cfg.ring, cfg.q);
  return riemann_sum(g1, c0) - riemann_sum(g, c0) - g.derivative_at(0);
}

mpq_class bernoulli_exact(int m) {
  if (m < 0 || m > 30) throw DomainError("bernoulli_exact supports 0 <= m <= 30");
  std::vector<mpq_class> b(static_cast<std::size_t>(m) + 1);
  b[0] = 1;
  for (int k = 1; k <= m; ++k) {
    // sum_{j<=k} C(k+1, j) B_j = 0
    mpq_class s = 0;
    mpz_class c = 1;  // C(k+1, 0)
    for (int j = 0; j < k; ++j) {
      s += c * b[static_cast<std::size_t>(j)];
      c = c * (k + 1 - j) / (j + 1);
    }
    b[static_cast<std::size_t>(k)] = -s / mpq_class(k + 1);
    b[static_cast<std::size_t>(k)].canonicalize();
  }
  return b[static_cast<std::size_t>(m)];
}

ClosedForm laplace_closed_form(const PadicScalar& t, const Character& xi, const IntegralConfig& cfg) {
  if (!t.is_zero() && t.valuation() < 1) throw DomainError("closed form needs v_p(t) >= 1");
  const RingPtr& ring = cfg.ring;
  const CycloElement x = char_eval(xi, 1, ring);
  const PadicScalar et = padic_exp(t);
  const CycloElement den = (cfg.q.q() * et) * x - CycloElement::one(ring);
  if (den.valuation_bound().resolved == false) {
    throw DomainError("closed form is singular: q xi e^t = 1");
  }
  const PadicScalar num = t + cfg.q.log_q();
  ClosedForm r;
  r.literal = CycloElement::from_scalar(ring, num) / den;
  r.normalized = cfg.q.limit_scalar() * r.literal;
  return r;
}

}  // namespace qfourier
