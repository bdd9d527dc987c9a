#include "qfourier/valuation.hpp"

#include <stdexcept>

namespace qfourier {

Valuation::Valuation(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("valuation with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = num / g;
  den_ = den / g;
}

double Valuation::to_double() const {
  if (infinite_) return 1e300;
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.infinite_ || b.infinite_) return Valuation::infinity();
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Valuation operator-(const Valuation& a, const Valuation& b) {
  if (b.infinite_) throw std::invalid_argument("subtracting an infinite valuation");
  if (a.infinite_) return a;
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.num_ == b.num_ && a.den_ == b.den_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (a.infinite_ || b.infinite_) {
    return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
  }
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

std::string Valuation::to_string() const {
  if (infinite_) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

ValuationBound ValuationBound::capped(const Valuation& precision) const {
  if (value < precision) return *this;
  return at_least(precision);
}

std::string ValuationBound::to_string() const {
  return resolved ? value.to_string() : ">=" + value.to_string();
}

}  // namespace qfourier
