#include "nahm/precision.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace nahm {

namespace {
constexpr double kLog2Of10 = 3.321928094887362;
constexpr mpfr_prec_t kGuardBits = 32;
}  // namespace

Rational make_rational(long num, long den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) {
    throw std::invalid_argument("parse_rational: cannot parse '" + text + "'");
  }
  if (r.get_den() == 0) throw std::domain_error("parse_rational: zero denominator");
  r.canonicalize();
  return r;
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

mpfr_prec_t PrecisionContext::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + kGuardBits;
}

Real::Real(const PrecisionContext& ctx) : digits_(ctx.digits) {
  mpfr_init2(v_, ctx.bits());
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, const PrecisionContext& ctx) : digits_(ctx.digits) {
  mpfr_init2(v_, ctx.bits());
  mpfr_set_si(v_, value, MPFR_RNDN);
}

Real::Real(const BigInt& value, const PrecisionContext& ctx) : digits_(ctx.digits) {
  mpfr_init2(v_, ctx.bits());
  mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Rational& value, const PrecisionContext& ctx) : digits_(ctx.digits) {
  mpfr_init2(v_, ctx.bits());
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const std::string& decimal, const PrecisionContext& ctx) : digits_(ctx.digits) {
  mpfr_init2(v_, ctx.bits());
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw std::invalid_argument("Real: cannot parse decimal '" + decimal + "'");
  }
}

Real::Real(const Real& other) : digits_(other.digits_) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : digits_(other.digits_) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
    digits_ = other.digits_;
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    mpfr_swap(v_, other.v_);
    digits_ = other.digits_;
  }
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::pi(const PrecisionContext& ctx) {
  Real r(ctx);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real make_result(const Real& a, const Real& b) {
  PrecisionContext ctx(Real::out_digits(a.digits_, b.digits_));
  return Real(ctx);
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r = make_result(a, b);
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r = make_result(a, b);
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r = make_result(a, b);
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  if (b.is_zero()) throw std::domain_error("Real: division by zero");
  Real r = make_result(a, b);
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& o) { return *this = *this + o; }
Real& Real::operator-=(const Real& o) { return *this = *this - o; }
Real& Real::operator*=(const Real& o) { return *this = *this * o; }
Real& Real::operator/=(const Real& o) { return *this = *this / o; }

Real Real::abs() const {
  Real r(*this);
  mpfr_abs(r.v_, r.v_, MPFR_RNDN);
  return r;
}

Real Real::ln() const {
  if (sign() <= 0) throw std::domain_error("Real: ln of non-positive value");
  Real r(*this);
  mpfr_log(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::exp() const {
  Real r(*this);
  mpfr_exp(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::sqrt() const {
  if (sign() < 0) throw std::domain_error("Real: sqrt of negative value");
  Real r(*this);
  mpfr_sqrt(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::sin() const {
  Real r(*this);
  mpfr_sin(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::pow(long e) const {
  Real r(*this);
  mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
  return r;
}

Real Real::pow(const Rational& e) const {
  if (is_integer(e)) {
    Real r(*this);
    mpfr_pow_z(r.v_, v_, e.get_num().get_mpz_t(), MPFR_RNDN);
    return r;
  }
  return pow(Real(e, context()));
}

Real Real::pow(const Real& e) const {
  if (sign() <= 0) throw std::domain_error("Real: pow with non-positive base");
  Real r = make_result(*this, e);
  mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN);
  return r;
}

BigInt Real::floor() const {
  mpfr_t f;
  mpfr_init2(f, mpfr_get_prec(v_));
  mpfr_floor(f, v_);
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), f, MPFR_RNDZ);
  mpfr_clear(f);
  return z;
}

double Real::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

std::string Real::to_string(int significant) const {
  int digits = significant > 0 ? significant : digits_;
  // %.*Re prints one digit before the point plus `digits-1` decimals.
  int n = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
  std::string out(static_cast<size_t>(n) + 1, '\0');
  mpfr_snprintf(out.data(), out.size(), "%.*Re", digits - 1, v_);
  out.resize(static_cast<size_t>(n));
  return out;
}

Real pow10(long e, const PrecisionContext& ctx) {
  Real ten(10, ctx);
  return ten.pow(e);
}

}  // namespace nahm
