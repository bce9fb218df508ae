#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nahm/precision.hpp"

namespace nahm {

/// Truncated power series in q with exact big-integer coefficients.
///
/// A value represents q^offset * (a_0 + a_1 q + ... + a_N q^N), known modulo
/// q^{offset+N+1}. `offset` exists for exact q^{C'} shifts; the relative
/// order N bounds what arithmetic may read.
class QSeriesTrunc {
 public:
  explicit QSeriesTrunc(long order, long offset = 0);

  static QSeriesTrunc one(long order);
  static QSeriesTrunc monomial(long exponent, long order);
  static QSeriesTrunc from_coeffs(std::vector<BigInt> coeffs, long offset = 0);

  long order() const { return order_; }
  long offset() const { return offset_; }
  /// Highest absolute exponent with a known coefficient.
  long top() const { return offset_ + order_; }

  /// Coefficient of q^n (absolute exponent). Exactly zero below offset;
  /// throws std::out_of_range above top().
  BigInt coeff(long n) const;
  BigInt& at_rel(long i) { return coeffs_.at(static_cast<size_t>(i)); }
  const BigInt& at_rel(long i) const { return coeffs_.at(static_cast<size_t>(i)); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  QSeriesTrunc shifted(long c) const;  // multiply by q^c, c >= 0
  QSeriesTrunc truncated(long new_top) const;

  friend QSeriesTrunc operator+(const QSeriesTrunc& a, const QSeriesTrunc& b);
  friend QSeriesTrunc operator-(const QSeriesTrunc& a, const QSeriesTrunc& b);
  friend QSeriesTrunc operator*(const QSeriesTrunc& a, const QSeriesTrunc& b);
  QSeriesTrunc& operator+=(const QSeriesTrunc& o);

  /// Multiplicative inverse modulo q^{order+1}; requires offset 0 and
  /// constant term +-1.
  QSeriesTrunc inverse() const;

  /// In-place multiply by (1 - q^stride)^e for any integer e (sparse pass).
  void mul_binomial_power(long stride, const BigInt& e);

  bool equals_to(const QSeriesTrunc& o, long upto) const;
  std::optional<long> first_mismatch(const QSeriesTrunc& o, long upto) const;

 private:
  std::vector<BigInt> coeffs_;
  long order_;
  long offset_;
};

/// One Pochhammer family (z; q^modulus)-style: residues in [1, modulus]
/// with positive multiplicities, split into numerator and denominator.
struct PochFamily {
  int modulus = 1;
  std::vector<std::pair<int, int>> numer;  // (residue, multiplicity)
  std::vector<std::pair<int, int>> denom;
};

/// Product side of an identity: a main family plus an optional second one
/// for mixed products such as (q^2,q^10;q^12)_inf / (q;q^2)_inf.
struct ProductSpec {
  PochFamily main;
  std::optional<PochFamily> extra;
};

/// Expand the product/quotient of Pochhammer factors to the given order:
/// numerator residues contribute (1-q^{r+tM})^{+m}, denominator ones the
/// inverse power.
QSeriesTrunc pochhammer_inv(const ProductSpec& spec, long order);

/// Expand 1/(q^base; q^base)_n to the given order.
QSeriesTrunc finite_pochhammer_inv(long base, long n, long order);

/// Euler factorization: exponents e_1..e_N with
/// f = prod_{n>=1} (1-q^n)^{-e_n} (mod q^{N+1}); requires a_0 = 1.
std::vector<BigInt> euler_factorize(const QSeriesTrunc& f);

/// Rebuild prod (1-q^n)^{-e_n} from an exponent sequence.
QSeriesTrunc pochhammer_from_exponents(const std::vector<BigInt>& e, long order);

/// Smallest period M <= max_period with e_n = e_{n+M} for every tested n,
/// or nullopt. The sequence must cover at least 3*max_period entries.
std::optional<int> detect_period(const std::vector<BigInt>& e, int max_period);

}  // namespace nahm
