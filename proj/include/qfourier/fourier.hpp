#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfourier/qintegral.hpp"

namespace qfourier {

// plain: I_q(phi_w f).  q_inverse: I_q(phi_{w q^{-1}} f) = (1/[p^N]) sum f(x) w^x.
enum class Twist { plain, q_inverse };

std::string to_string(Twist t);

// Transform values for every w in C_{p^n}, computed at integral level N.
// The unnormalized sums and the common divisor [p^N] are kept apart so that
// inversion divides once.
struct SpectralTable {
  int n = 0;
  int N = 0;
  Twist twist = Twist::plain;
  RingPtr ring;
  std::vector<Character> characters;
  std::vector<CycloElement> sums;
  PadicScalar normalizer;

  std::size_t size() const { return characters.size(); }
  CycloElement entry(std::size_t i) const { return sums[i] / normalizer; }
  std::vector<CycloElement> entries() const;
};

// Requires ring level >= max(n, character levels of f) and N >= n.
SpectralTable iq_transform(const UDFunction& f, int n, const IntegralConfig& cfg,
                           Twist twist = Twist::plain);

// sum_w w^{-x} tbl[w]; requires tbl.N == tbl.n.
CycloElement inverse_finite(const SpectralTable& tbl, std::int64_t x);

// (log q/(q-1)) * inverse_finite at matched levels 1..n_max. Requires q != 1.
IntegralResult inverse_limit(const UDFunction& f, std::int64_t x, int n_max, const IntegralConfig& cfg);

// x -> sum_w c_w w^{-x}
struct BandLimited {
  int n = 0;
  RingPtr ring;
  std::vector<Character> characters;
  std::vector<CycloElement> coeffs;

  CycloElement operator()(std::int64_t x) const;
};

enum class ConvolutionMode { woodcock_q1, star_q };

// Coefficient at w is the product of the two transforms (twisted for star_q),
// each computed at level cfg.N.
BandLimited convolve(const UDFunction& f, const UDFunction& g, int n, const IntegralConfig& cfg,
                     ConvolutionMode mode);

// A * I_q^{(x)}(f(x) g(z-x) q^{-x}) at level cfg.N, A = (q-1)/log q.
CycloElement reflected_integral(const UDFunction& f, const UDFunction& g, std::int64_t z,
                                const IntegralConfig& cfg);

// (f (x)_q g')(z) := A I_q^{(x)}(f(x) g(z-x) q^{-x}) - (f *_q g)(z)
CycloElement otimes_q(const UDFunction& f, const UDFunction& g, std::int64_t z, int n,
                      const IntegralConfig& cfg);
CycloElement otimes_q(const UDFunction& f, const UDFunction& g, std::int64_t z,
                      const BandLimited& star, const IntegralConfig& cfg);

enum class Identity { prop1, mult, thm2, thm3, shift, closed_form };

std::string to_string(Identity id);
Identity parse_identity(const std::string& name);

struct VerificationReport {
  Identity identity = Identity::prop1;
  ValuationBound literal;
  ValuationBound corrected;
  // mult, closed_form: measured ratio against (q-1)/log q.
  std::optional<ValuationBound> ratio;
  int n = 0;
  int N = 0;
  // thm3 only
  int outer_level = 0;
  std::string note;
};

// Level of the outer z-integral in thm3 when none is given.
int default_outer_level(int n, int N);

// Residuals are minimized over the evaluation points of each identity.
// outer_level <= 0 selects default_outer_level.
VerificationReport verify_identity(Identity id, const UDFunction& f, const UDFunction& g,
                                   const IntegralConfig& cfg, int n, int outer_level = 0);

}  // namespace qfourier
