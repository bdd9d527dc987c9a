#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace qfourier {

// A valuation in a ramified extension, normalized so v(p) = 1: a rational
// with denominator dividing the ramification degree, or +infinity.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr Valuation(std::int64_t n) : num_(n), den_(1) {}
  Valuation(std::int64_t num, std::int64_t den);

  static constexpr Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return !infinite_ && den_ == 1; }
  double to_double() const;

  friend Valuation operator+(const Valuation& a, const Valuation& b);
  friend Valuation operator-(const Valuation& a, const Valuation& b);

  friend bool operator==(const Valuation& a, const Valuation& b);
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

  // "3", "1/2", or "inf"
  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  bool infinite_ = false;
};

// The valuation of a value known to finite precision. When the value cannot
// be told apart from zero, `resolved` is false and `value` is a lower bound
// (the valuation of the uncertainty).
struct ValuationBound {
  Valuation value;
  bool resolved = true;

  static ValuationBound exact(Valuation v) { return {v, true}; }
  static ValuationBound at_least(Valuation v) { return {v, false}; }

  // The guaranteed lower bound, which is the valuation itself when resolved.
  const Valuation& lower() const { return value; }
  // Reports are capped to the precision a coarser run could resolve.
  ValuationBound capped(const Valuation& precision) const;

  bool operator==(const ValuationBound&) const = default;

  // "3", "1/2", ">=6"
  std::string to_string() const;
};

}  // namespace qfourier
