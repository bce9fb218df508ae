#include "nahm/qseries.hpp"

#include <algorithm>
#include <stdexcept>

namespace nahm {

QSeriesTrunc::QSeriesTrunc(long order, long offset) : order_(order), offset_(offset) {
  if (order < 0) throw std::invalid_argument("QSeriesTrunc: negative order");
  if (offset < 0) throw std::invalid_argument("QSeriesTrunc: negative offset");
  coeffs_.assign(static_cast<size_t>(order) + 1, BigInt(0));
}

QSeriesTrunc QSeriesTrunc::one(long order) {
  QSeriesTrunc s(order);
  s.coeffs_[0] = 1;
  return s;
}

QSeriesTrunc QSeriesTrunc::monomial(long exponent, long order) {
  QSeriesTrunc s(order, exponent);
  s.coeffs_[0] = 1;
  return s;
}

QSeriesTrunc QSeriesTrunc::from_coeffs(std::vector<BigInt> coeffs, long offset) {
  if (coeffs.empty()) throw std::invalid_argument("QSeriesTrunc: empty coefficient list");
  QSeriesTrunc s(static_cast<long>(coeffs.size()) - 1, offset);
  s.coeffs_ = std::move(coeffs);
  return s;
}

BigInt QSeriesTrunc::coeff(long n) const {
  if (n > top()) throw std::out_of_range("QSeriesTrunc::coeff: beyond truncation order");
  if (n < offset_) return BigInt(0);
  return coeffs_[static_cast<size_t>(n - offset_)];
}

QSeriesTrunc QSeriesTrunc::shifted(long c) const {
  if (c < 0) throw std::invalid_argument("QSeriesTrunc::shifted: negative shift");
  QSeriesTrunc s(*this);
  s.offset_ += c;
  return s;
}

QSeriesTrunc QSeriesTrunc::truncated(long new_top) const {
  if (new_top > top()) throw std::invalid_argument("QSeriesTrunc::truncated: cannot extend");
  long new_order = new_top - offset_;
  if (new_order < 0) {
    // Everything known lies above the cut; the result is exactly zero there.
    return QSeriesTrunc(new_top >= 0 ? new_top : 0, 0);
  }
  QSeriesTrunc s(new_order, offset_);
  for (long i = 0; i <= new_order; ++i) s.coeffs_[static_cast<size_t>(i)] = coeffs_[static_cast<size_t>(i)];
  return s;
}

QSeriesTrunc operator+(const QSeriesTrunc& a, const QSeriesTrunc& b) {
  long new_top = std::min(a.top(), b.top());
  long new_offset = std::min(a.offset_, b.offset_);
  QSeriesTrunc s(new_top - new_offset, new_offset);
  for (long n = new_offset; n <= new_top; ++n) {
    s.coeffs_[static_cast<size_t>(n - new_offset)] = a.coeff(n) + b.coeff(n);
  }
  return s;
}

QSeriesTrunc operator-(const QSeriesTrunc& a, const QSeriesTrunc& b) {
  long new_top = std::min(a.top(), b.top());
  long new_offset = std::min(a.offset_, b.offset_);
  QSeriesTrunc s(new_top - new_offset, new_offset);
  for (long n = new_offset; n <= new_top; ++n) {
    s.coeffs_[static_cast<size_t>(n - new_offset)] = a.coeff(n) - b.coeff(n);
  }
  return s;
}

QSeriesTrunc operator*(const QSeriesTrunc& a, const QSeriesTrunc& b) {
  long new_order = std::min(a.order_, b.order_);
  QSeriesTrunc s(new_order, a.offset_ + b.offset_);
  for (long i = 0; i <= std::min(a.order_, new_order); ++i) {
    const BigInt& ai = a.coeffs_[static_cast<size_t>(i)];
    if (ai == 0) continue;
    long jmax = new_order - i;
    for (long j = 0; j <= std::min(b.order_, jmax); ++j) {
      const BigInt& bj = b.coeffs_[static_cast<size_t>(j)];
      if (bj == 0) continue;
      mpz_addmul(s.coeffs_[static_cast<size_t>(i + j)].get_mpz_t(), ai.get_mpz_t(),
                 bj.get_mpz_t());
    }
  }
  return s;
}

QSeriesTrunc& QSeriesTrunc::operator+=(const QSeriesTrunc& o) { return *this = *this + o; }

QSeriesTrunc QSeriesTrunc::inverse() const {
  if (offset_ != 0) throw std::domain_error("QSeriesTrunc::inverse: nonzero offset");
  const BigInt& a0 = coeffs_[0];
  if (a0 != 1 && a0 != -1) {
    throw std::domain_error("QSeriesTrunc::inverse: constant term must be +-1");
  }
  QSeriesTrunc b(order_);
  b.coeffs_[0] = a0;
  for (long n = 1; n <= order_; ++n) {
    BigInt acc(0);
    for (long k = 1; k <= n; ++k) {
      mpz_addmul(acc.get_mpz_t(), coeffs_[static_cast<size_t>(k)].get_mpz_t(),
                 b.coeffs_[static_cast<size_t>(n - k)].get_mpz_t());
    }
    b.coeffs_[static_cast<size_t>(n)] = -a0 * acc;
  }
  return b;
}

void QSeriesTrunc::mul_binomial_power(long stride, const BigInt& e) {
  if (stride < 1) throw std::invalid_argument("mul_binomial_power: stride must be >= 1");
  if (e == 0) return;
  long jmax = order_ / stride;
  std::vector<BigInt> factor(static_cast<size_t>(jmax) + 1);
  if (e > 0) {
    // (1-x)^e = sum_j (-1)^j C(e,j) x^j
    for (long j = 0; j <= jmax; ++j) {
      BigInt binom;
      if (j <= e) {
        mpz_bin_ui(binom.get_mpz_t(), e.get_mpz_t(), static_cast<unsigned long>(j));
        if (j % 2 == 1) binom = -binom;
      }
      factor[static_cast<size_t>(j)] = binom;
    }
  } else {
    // (1-x)^{-m} = sum_j C(m+j-1, j) x^j
    BigInt m = -e;
    for (long j = 0; j <= jmax; ++j) {
      BigInt top = m + j - 1;
      BigInt binom;
      mpz_bin_ui(binom.get_mpz_t(), top.get_mpz_t(), static_cast<unsigned long>(j));
      factor[static_cast<size_t>(j)] = binom;
    }
  }
  std::vector<BigInt> out(coeffs_.size());
  for (long t = 0; t <= order_; ++t) {
    BigInt acc(0);
    for (long j = 0; j * stride <= t && j <= jmax; ++j) {
      const BigInt& c = factor[static_cast<size_t>(j)];
      if (c == 0) continue;
      mpz_addmul(acc.get_mpz_t(), c.get_mpz_t(),
                 coeffs_[static_cast<size_t>(t - j * stride)].get_mpz_t());
    }
    out[static_cast<size_t>(t)] = std::move(acc);
  }
  coeffs_ = std::move(out);
}

bool QSeriesTrunc::equals_to(const QSeriesTrunc& o, long upto) const {
  return !first_mismatch(o, upto).has_value();
}

std::optional<long> QSeriesTrunc::first_mismatch(const QSeriesTrunc& o, long upto) const {
  if (upto > top() || upto > o.top()) {
    throw std::invalid_argument("first_mismatch: comparison beyond known order");
  }
  for (long n = 0; n <= upto; ++n) {
    if (coeff(n) != o.coeff(n)) return n;
  }
  return std::nullopt;
}

namespace {

void validate_family(const PochFamily& fam) {
  if (fam.modulus < 1) throw std::invalid_argument("ProductSpec: modulus must be >= 1");
  auto check = [&](const std::vector<std::pair<int, int>>& rs) {
    for (auto [r, m] : rs) {
      if (r < 1 || r > fam.modulus) {
        throw std::invalid_argument("ProductSpec: residue outside [1, modulus]");
      }
      if (m < 1) throw std::invalid_argument("ProductSpec: multiplicity must be positive");
    }
  };
  check(fam.numer);
  check(fam.denom);
}

void apply_family(QSeriesTrunc& s, const PochFamily& fam, long order) {
  for (auto [r, mult] : fam.numer) {
    for (long e = r; e <= order; e += fam.modulus) s.mul_binomial_power(e, BigInt(mult));
  }
  for (auto [r, mult] : fam.denom) {
    for (long e = r; e <= order; e += fam.modulus) s.mul_binomial_power(e, BigInt(-mult));
  }
}

}  // namespace

QSeriesTrunc pochhammer_inv(const ProductSpec& spec, long order) {
  validate_family(spec.main);
  if (spec.extra) validate_family(*spec.extra);
  QSeriesTrunc s = QSeriesTrunc::one(order);
  apply_family(s, spec.main, order);
  if (spec.extra) apply_family(s, *spec.extra, order);
  return s;
}

QSeriesTrunc finite_pochhammer_inv(long base, long n, long order) {
  if (base < 1) throw std::invalid_argument("finite_pochhammer_inv: base must be >= 1");
  if (n < 0) throw std::invalid_argument("finite_pochhammer_inv: n must be >= 0");
  QSeriesTrunc s = QSeriesTrunc::one(order);
  for (long t = 1; t <= n; ++t) {
    if (t * base > order) break;  // factor is 1 modulo the truncation
    s.mul_binomial_power(t * base, BigInt(-1));
  }
  return s;
}

std::vector<BigInt> euler_factorize(const QSeriesTrunc& f) {
  if (f.offset() != 0 || f.coeff(0) != 1) {
    throw std::domain_error("euler_factorize: series must start with constant term 1");
  }
  long order = f.order();
  QSeriesTrunc g(f);
  std::vector<BigInt> e(static_cast<size_t>(order) + 1);  // e[0] unused
  for (long n = 1; n <= order; ++n) {
    e[static_cast<size_t>(n)] = g.coeff(n);
    if (e[static_cast<size_t>(n)] != 0) {
      g.mul_binomial_power(n, e[static_cast<size_t>(n)]);
    }
  }
  return e;
}

QSeriesTrunc pochhammer_from_exponents(const std::vector<BigInt>& e, long order) {
  QSeriesTrunc s = QSeriesTrunc::one(order);
  for (long n = 1; n < static_cast<long>(e.size()) && n <= order; ++n) {
    const BigInt& en = e[static_cast<size_t>(n)];
    if (en != 0) s.mul_binomial_power(n, -en);
  }
  return s;
}

std::optional<int> detect_period(const std::vector<BigInt>& e, int max_period) {
  if (max_period < 1) throw std::invalid_argument("detect_period: max_period must be >= 1");
  long len = static_cast<long>(e.size()) - 1;  // entries e_1..e_len
  if (len < 3L * max_period) {
    throw std::invalid_argument("detect_period: sequence shorter than 3*max_period");
  }
  for (int m = 1; m <= max_period; ++m) {
    bool ok = true;
    for (long n = 1; n + m <= len; ++n) {
      if (e[static_cast<size_t>(n)] != e[static_cast<size_t>(n + m)]) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

}  // namespace nahm
