#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ruelle {

// Wide intermediate for overflow-free products of 64-bit entries.
__extension__ typedef __int128 int128;


// 2x2 integer matrix [[a, b], [c, d]] with overflow-checked products.
struct IntMatrix2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  static IntMatrix2 identity() { return {}; }

  std::int64_t trace() const;
  std::int64_t det() const;
  IntMatrix2 adjugate() const { return {d, -b, -c, a}; }
  IntMatrix2 operator*(const IntMatrix2& rhs) const;
  IntMatrix2 operator-(const IntMatrix2& rhs) const;
  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;

  // Throws EnumerationLimit if any entry of the result leaves int64.
  IntMatrix2 pow(int n) const;
};

// Exact rational with positive denominator, always in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  Rational operator+(const Rational& rhs) const;
  Rational operator*(const Rational& rhs) const;
  friend bool operator==(const Rational&, const Rational&) = default;
  std::strong_ordering operator<=>(const Rational& rhs) const;

  std::string str() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Point (p/den, q/den) of the torus R^2 / Z^2 with 0 <= p, q < den.
// All points of one periodic-point enumeration share `den`.
struct TorusPoint {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t den = 1;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  // Lexicographic in (x, y) for a common denominator.
  std::strong_ordering operator<=>(const TorusPoint& rhs) const;

  Rational x() const { return {p, den}; }
  Rational y() const { return {q, den}; }
  // "p/q:r/s" in lowest terms.
  std::string str() const;
};

// x -> A x mod 1, exact.
TorusPoint apply_mod1(const IntMatrix2& a, const TorusPoint& x);

}  // namespace ruelle
