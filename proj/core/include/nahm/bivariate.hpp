#pragma once

#include "nahm/qseries.hpp"

namespace nahm {

/// Rectangularly truncated series sum a_{m,n} x^m q^n with exact integer
/// coefficients, 0 <= m <= xorder, 0 <= n <= qorder.
class BivariateSeries {
 public:
  BivariateSeries(long xorder, long qorder);

  static BivariateSeries one(long xorder, long qorder);

  long xorder() const { return xorder_; }
  long qorder() const { return qorder_; }

  const BigInt& coeff(long m, long n) const;
  BigInt& at(long m, long n);

  friend BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b);
  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b);
  BivariateSeries& operator+=(const BivariateSeries& o);

  /// In-place multiply by (1 + sign * x^xdeg q^qdeg)^{+-1}.
  void mul_factor(long xdeg, long qdeg, int sign, bool inverted);

  bool operator==(const BivariateSeries& o) const;

 private:
  long xorder_, qorder_;
  std::vector<std::vector<BigInt>> a_;  // [m][n]
};

/// a_{m,n} x^m q^n -> a_{m,n} x^m q^{step*m(m-1)/2 + n}; terms pushed past
/// the q-truncation are dropped.
BivariateSeries staircase_insert(const BivariateSeries& f, long step);

/// Column sums over m: f(1, q) as a truncated q-series.
QSeriesTrunc eval_x1(const BivariateSeries& f);

/// prod_{t>=0} (1 + sign * x^xdeg q^{qstart + t*qstep})^{+-1} truncated to
/// (xorder, qorder). Factors with q-degree beyond qorder are 1 modulo the
/// truncation; a q-degree-0 leading factor is applied once.
BivariateSeries bivariate_pochhammer(long xorder, long qorder, long xdeg, long qstart,
                                     long qstep, int sign, bool inverted);

/// sum_{n>=0} x^n q^{shift*n(n-1)/2} / (q;q)_n   (shift 0 or 1 give the two
/// classical Euler expansions).
BivariateSeries bivariate_euler_sum(long xorder, long qorder, long shift);

}  // namespace nahm
