#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace prxml {

// Exact rational number. Always stored in lowest terms with a positive
// denominator; all arithmetic is arbitrary-precision.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long num) : v_(num) {}
  Rational(long num, long den);
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rational zero() { return Rational(); }
  static Rational one() { return Rational(1); }

  // Parses "p/q", "p", or a plain decimal like "0.25". Returns nothing on
  // malformed input or a zero denominator.
  static std::optional<Rational> parse(const std::string& text);

  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; v_.canonicalize(); return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; v_.canonicalize(); return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; v_.canonicalize(); return *this; }
  Rational& operator/=(const Rational& o);

  bool operator==(const Rational& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()) == 0; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()) < 0; }
  bool operator<=(const Rational& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()) <= 0; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return *this == one(); }
  // Strictly inside (0, 1).
  bool in_open_unit_interval() const { return sgn(v_) > 0 && *this < one(); }

  std::string numerator_str() const { return v_.get_num().get_str(); }
  std::string denominator_str() const { return v_.get_den().get_str(); }

  // Lowest-terms "p/q", or just "p" when the denominator is 1.
  std::string str() const;
  // Display-only decimal approximation with the given number of significant
  // digits (default 6).
  std::string approx_str(int significant = 6) const;
  double to_double() const { return v_.get_d(); }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace prxml
