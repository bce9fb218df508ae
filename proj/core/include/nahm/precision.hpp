#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nahm {

using BigInt = mpz_class;

// Reduced fraction with big-integer numerator and positive denominator.
// mpq_class canonicalizes on construction, which is exactly the invariant
// we need (gcd(num, den) = 1, den > 0).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);
bool is_integer(const Rational& r);

/// Decimal working precision shared by a family of Real values.
struct PrecisionContext {
  int digits;

  explicit PrecisionContext(int digits_ = 120) : digits(digits_) {
    if (digits < 30) throw std::invalid_argument("PrecisionContext: digits must be >= 30");
  }

  // Binary precision backing the decimal guarantee, with guard bits so that
  // chained operations still deliver `digits` correct decimals.
  mpfr_prec_t bits() const;

  bool operator==(const PrecisionContext& o) const { return digits == o.digits; }
};

/// Arbitrary-precision real number bound to a PrecisionContext.
///
/// Values are immutable in spirit: every operation returns a fresh Real at
/// the wider of the operand precisions. Division by zero, ln of a
/// non-positive value and sqrt of a negative value throw std::domain_error.
class Real {
 public:
  explicit Real(const PrecisionContext& ctx);
  Real(long value, const PrecisionContext& ctx);
  Real(const BigInt& value, const PrecisionContext& ctx);
  Real(const Rational& value, const PrecisionContext& ctx);
  Real(const std::string& decimal, const PrecisionContext& ctx);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real pi(const PrecisionContext& ctx);

  PrecisionContext context() const { return PrecisionContext(digits_); }
  mpfr_prec_t precision_bits() const { return mpfr_get_prec(v_); }
  const mpfr_t& raw() const { return v_; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  int cmp(long v) const { return mpfr_cmp_si(v_, v); }

  Real abs() const;
  Real ln() const;    // requires *this > 0
  Real exp() const;
  Real sqrt() const;  // requires *this >= 0
  Real sin() const;
  Real pow(long e) const;
  Real pow(const Rational& e) const;  // requires base > 0 unless e is integral
  Real pow(const Real& e) const;      // requires base > 0

  BigInt floor() const;
  double to_double() const;

  // Scientific-notation decimal string; `significant` defaults to the full
  // context width. Output is deterministic for a given value and precision.
  std::string to_string(int significant = 0) const;

 private:
  mpfr_t v_;
  int digits_;

  static int out_digits(int a, int b) { return a > b ? a : b; }
  friend Real make_result(const Real& a, const Real& b);
};

// Powers of ten as Reals, e.g. pow10(-40) for tolerances.
Real pow10(long e, const PrecisionContext& ctx);

}  // namespace nahm
