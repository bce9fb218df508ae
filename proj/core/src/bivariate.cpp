#include "nahm/bivariate.hpp"

#include <stdexcept>

namespace nahm {

BivariateSeries::BivariateSeries(long xorder, long qorder) : xorder_(xorder), qorder_(qorder) {
  if (xorder < 0 || qorder < 0) throw std::invalid_argument("BivariateSeries: negative order");
  a_.assign(static_cast<size_t>(xorder) + 1,
            std::vector<BigInt>(static_cast<size_t>(qorder) + 1, BigInt(0)));
}

BivariateSeries BivariateSeries::one(long xorder, long qorder) {
  BivariateSeries s(xorder, qorder);
  s.a_[0][0] = 1;
  return s;
}

const BigInt& BivariateSeries::coeff(long m, long n) const {
  return a_.at(static_cast<size_t>(m)).at(static_cast<size_t>(n));
}

BigInt& BivariateSeries::at(long m, long n) {
  return a_.at(static_cast<size_t>(m)).at(static_cast<size_t>(n));
}

BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) {
  long M = std::min(a.xorder_, b.xorder_);
  long N = std::min(a.qorder_, b.qorder_);
  BivariateSeries s(M, N);
  for (long m = 0; m <= M; ++m) {
    for (long n = 0; n <= N; ++n) {
      s.a_[static_cast<size_t>(m)][static_cast<size_t>(n)] = a.coeff(m, n) + b.coeff(m, n);
    }
  }
  return s;
}

BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
  long M = std::min(a.xorder_, b.xorder_);
  long N = std::min(a.qorder_, b.qorder_);
  BivariateSeries s(M, N);
  for (long m1 = 0; m1 <= std::min(a.xorder_, M); ++m1) {
    for (long n1 = 0; n1 <= std::min(a.qorder_, N); ++n1) {
      const BigInt& c1 = a.coeff(m1, n1);
      if (c1 == 0) continue;
      for (long m2 = 0; m2 + m1 <= M && m2 <= b.xorder_; ++m2) {
        for (long n2 = 0; n2 + n1 <= N && n2 <= b.qorder_; ++n2) {
          const BigInt& c2 = b.coeff(m2, n2);
          if (c2 == 0) continue;
          mpz_addmul(s.a_[static_cast<size_t>(m1 + m2)][static_cast<size_t>(n1 + n2)].get_mpz_t(),
                     c1.get_mpz_t(), c2.get_mpz_t());
        }
      }
    }
  }
  return s;
}

BivariateSeries& BivariateSeries::operator+=(const BivariateSeries& o) {
  return *this = *this + o;
}

void BivariateSeries::mul_factor(long xdeg, long qdeg, int sign, bool inverted) {
  if (xdeg < 0 || qdeg < 0 || (xdeg == 0 && qdeg == 0)) {
    throw std::invalid_argument("mul_factor: factor must move in x or q");
  }
  if (sign != 1 && sign != -1) throw std::invalid_argument("mul_factor: sign must be +-1");
  if (!inverted) {
    // descending pass: a'_{m,n} = a_{m,n} + sign * a_{m-xdeg, n-qdeg}
    for (long m = xorder_; m >= 0; --m) {
      for (long n = qorder_; n >= 0; --n) {
        if (m < xdeg || n < qdeg) continue;
        const BigInt& src = a_[static_cast<size_t>(m - xdeg)][static_cast<size_t>(n - qdeg)];
        if (src == 0) continue;
        if (sign > 0) {
          a_[static_cast<size_t>(m)][static_cast<size_t>(n)] += src;
        } else {
          a_[static_cast<size_t>(m)][static_cast<size_t>(n)] -= src;
        }
      }
    }
  } else {
    // ascending pass inverts the factor: b = a -+ shifted(b)
    for (long m = 0; m <= xorder_; ++m) {
      for (long n = 0; n <= qorder_; ++n) {
        if (m < xdeg || n < qdeg) continue;
        const BigInt& src = a_[static_cast<size_t>(m - xdeg)][static_cast<size_t>(n - qdeg)];
        if (src == 0) continue;
        if (sign > 0) {
          a_[static_cast<size_t>(m)][static_cast<size_t>(n)] -= src;
        } else {
          a_[static_cast<size_t>(m)][static_cast<size_t>(n)] += src;
        }
      }
    }
  }
}

bool BivariateSeries::operator==(const BivariateSeries& o) const {
  if (xorder_ != o.xorder_ || qorder_ != o.qorder_) return false;
  return a_ == o.a_;
}

BivariateSeries staircase_insert(const BivariateSeries& f, long step) {
  if (step < 1) throw std::invalid_argument("staircase_insert: step must be >= 1");
  BivariateSeries out(f.xorder(), f.qorder());
  for (long m = 0; m <= f.xorder(); ++m) {
    long lift = step * m * (m - 1) / 2;
    if (lift > f.qorder()) break;
    for (long n = 0; n + lift <= f.qorder(); ++n) {
      const BigInt& c = f.coeff(m, n);
      if (c != 0) out.at(m, n + lift) = c;
    }
  }
  return out;
}

QSeriesTrunc eval_x1(const BivariateSeries& f) {
  QSeriesTrunc s(f.qorder());
  for (long n = 0; n <= f.qorder(); ++n) {
    BigInt acc(0);
    for (long m = 0; m <= f.xorder(); ++m) acc += f.coeff(m, n);
    s.at_rel(n) = acc;
  }
  return s;
}

BivariateSeries bivariate_pochhammer(long xorder, long qorder, long xdeg, long qstart,
                                     long qstep, int sign, bool inverted) {
  if (qstep < 1) throw std::invalid_argument("bivariate_pochhammer: qstep must be >= 1");
  if (xdeg < 1) throw std::invalid_argument("bivariate_pochhammer: xdeg must be >= 1");
  BivariateSeries s = BivariateSeries::one(xorder, qorder);
  for (long qd = qstart; qd <= qorder; qd += qstep) {
    s.mul_factor(xdeg, qd, sign, inverted);
  }
  return s;
}

BivariateSeries bivariate_euler_sum(long xorder, long qorder, long shift) {
  BivariateSeries s(xorder, qorder);
  for (long n = 0; n <= xorder; ++n) {
    long lead = shift * n * (n - 1) / 2;
    if (lead > qorder) break;
    QSeriesTrunc inv = finite_pochhammer_inv(1, n, qorder - lead);
    for (long j = 0; j + lead <= qorder; ++j) s.at(n, j + lead) = inv.coeff(j);
  }
  return s;
}

}  // namespace nahm
