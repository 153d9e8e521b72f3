#include "ruelle/exact.hpp"

#include <numeric>

#include "ruelle/errors.hpp"

namespace ruelle {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw EnumerationLimit("int64 overflow in product");
  return r;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw EnumerationLimit("int64 overflow in sum");
  return r;
}

std::int64_t mod_floor(int128 x, std::int64_t m) {
  auto r = static_cast<std::int64_t>(x % m);
  return r < 0 ? r + m : r;
}

}  // namespace

std::int64_t IntMatrix2::trace() const { return checked_add(a, d); }

std::int64_t IntMatrix2::det() const {
  return checked_add(checked_mul(a, d), -checked_mul(b, c));
}

IntMatrix2 IntMatrix2::operator*(const IntMatrix2& r) const {
  return {checked_add(checked_mul(a, r.a), checked_mul(b, r.c)),
          checked_add(checked_mul(a, r.b), checked_mul(b, r.d)),
          checked_add(checked_mul(c, r.a), checked_mul(d, r.c)),
          checked_add(checked_mul(c, r.b), checked_mul(d, r.d))};
}

IntMatrix2 IntMatrix2::operator-(const IntMatrix2& r) const {
  return {checked_add(a, -r.a), checked_add(b, -r.b), checked_add(c, -r.c),
          checked_add(d, -r.d)};
}

IntMatrix2 IntMatrix2::pow(int n) const {
  if (n < 0) throw DomainError("negative matrix power");
  IntMatrix2 result = identity();
  for (int i = 0; i < n; ++i) result = result * *this;
  return result;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::operator+(const Rational& r) const {
  const std::int64_t g = std::gcd(den_, r.den_);
  const std::int64_t lhs_scale = r.den_ / g;
  const std::int64_t rhs_scale = den_ / g;
  return {checked_add(checked_mul(num_, lhs_scale), checked_mul(r.num_, rhs_scale)),
          checked_mul(den_, lhs_scale)};
}

Rational Rational::operator*(const Rational& r) const {
  const std::int64_t g1 = std::gcd(num_, r.den_);
  const std::int64_t g2 = std::gcd(r.num_, den_);
  return {checked_mul(num_ / g1, r.num_ / g2), checked_mul(den_ / g2, r.den_ / g1)};
}

std::strong_ordering Rational::operator<=>(const Rational& r) const {
  const int128 lhs = static_cast<int128>(num_) * r.den_;
  const int128 rhs = static_cast<int128>(r.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering TorusPoint::operator<=>(const TorusPoint& rhs) const {
  if (den == rhs.den) {
    if (auto c = p <=> rhs.p; c != 0) return c;
    return q <=> rhs.q;
  }
  if (auto c = x() <=> rhs.x(); c != 0) return c;
  return y() <=> rhs.y();
}

std::string TorusPoint::str() const { return x().str() + ":" + y().str(); }

TorusPoint apply_mod1(const IntMatrix2& m, const TorusPoint& x) {
  const int128 p = static_cast<int128>(m.a) * x.p + static_cast<int128>(m.b) * x.q;
  const int128 q = static_cast<int128>(m.c) * x.p + static_cast<int128>(m.d) * x.q;
  return {mod_floor(p, x.den), mod_floor(q, x.den), x.den};
}

}  // namespace ruelle
