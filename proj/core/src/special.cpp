#include "nahm/special.hpp"

namespace nahm {

namespace {

// sum_{n>=1} z^n / n^2 for 0 <= z <= 1/2; the ratio test gives one bit of
// progress per term at worst, so the loop is bounded by ~bits terms.
Real li2_series(const Real& z) {
  PrecisionContext ctx = z.context();
  Real sum(ctx);
  Real zpow(ctx);
  zpow = z;
  Real cutoff = pow10(-(ctx.digits + 10), ctx);
  for (long n = 1;; ++n) {
    Real term = zpow / Real(n * n, ctx);
    sum += term;
    if (term < cutoff) break;
    zpow *= z;
    if (n > 8 * ctx.bits()) throw std::runtime_error("li2_series: no convergence");
  }
  return sum;
}

}  // namespace

Real li2(const Real& z) {
  PrecisionContext ctx = z.context();
  if (z.sign() < 0 || z.cmp(1) > 0) throw std::domain_error("li2: argument outside [0,1]");
  if (z.is_zero()) return Real(ctx);
  Real pi = Real::pi(ctx);
  if (z.cmp(1) == 0) return pi * pi / Real(6, ctx);
  Real half(make_rational(1, 2), ctx);
  if (z <= half) return li2_series(z);
  Real one(1, ctx);
  Real w = one - z;
  return pi * pi / Real(6, ctx) - z.ln() * w.ln() - li2_series(w);
}

Real rogers_dilog(const Real& z) {
  PrecisionContext ctx = z.context();
  if (z.sign() < 0 || z.cmp(1) > 0) throw std::domain_error("rogers_dilog: argument outside [0,1]");
  if (z.is_zero()) return Real(ctx);
  if (z.cmp(1) == 0) {
    Real pi = Real::pi(ctx);
    return pi * pi / Real(6, ctx);
  }
  Real one(1, ctx);
  Real half(make_rational(1, 2), ctx);
  return li2(z) + half * z.ln() * (one - z).ln();
}

std::vector<BigInt> eulerian_row(int n) {
  if (n < 1) throw std::invalid_argument("eulerian_row: n must be >= 1");
  // A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1)
  std::vector<BigInt> row{1};
  for (int m = 2; m <= n; ++m) {
    std::vector<BigInt> next(m, 0);
    for (int k = 0; k < m; ++k) {
      if (k < static_cast<int>(row.size())) next[k] += BigInt(k + 1) * row[k];
      if (k >= 1 && k - 1 < static_cast<int>(row.size())) next[k] += BigInt(m - k) * row[k - 1];
    }
    row = std::move(next);
  }
  return row;
}

Real polylog_neg(int n, const Real& z) {
  if (n < 0) throw std::invalid_argument("polylog_neg: order must be >= 0");
  PrecisionContext ctx = z.context();
  if (z.sign() <= 0 || z.cmp(1) >= 0) throw std::domain_error("polylog_neg: argument outside (0,1)");
  Real one(1, ctx);
  Real om = one - z;
  if (n == 0) return z / om;
  std::vector<BigInt> row = eulerian_row(n);
  // P_n(z) = sum_k A(n,k) z^{n-k}, evaluated by Horner in ascending powers.
  Real num(ctx);
  for (int k = 0; k < n; ++k) {
    num = num * z + Real(row[static_cast<size_t>(k)], ctx);
  }
  num *= z;  // lowest power of P_n is z^1
  return num / om.pow(static_cast<long>(n) + 1);
}

std::vector<Rational> bernoulli_polynomial(int p) {
  if (p < 0) throw std::invalid_argument("bernoulli_polynomial: p must be >= 0");
  // Bernoulli numbers through the defining recursion sum_j C(m+1,j) B_j = 0.
  std::vector<Rational> bnum(static_cast<size_t>(p) + 1);
  bnum[0] = 1;
  for (int m = 1; m <= p; ++m) {
    Rational acc(0);
    for (int j = 0; j < m; ++j) {
      BigInt binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1),
                   static_cast<unsigned long>(j));
      acc += Rational(binom) * bnum[static_cast<size_t>(j)];
    }
    bnum[static_cast<size_t>(m)] = -acc / Rational(m + 1);
  }
  std::vector<Rational> coeffs(static_cast<size_t>(p) + 1);
  for (int j = 0; j <= p; ++j) {
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(p),
                 static_cast<unsigned long>(j));
    coeffs[static_cast<size_t>(j)] = Rational(binom) * bnum[static_cast<size_t>(p - j)];
  }
  return coeffs;
}

std::optional<Rational> rational_reconstruct(const Real& x, const BigInt& max_den,
                                             const Real& tol) {
  if (max_den < 1) throw std::invalid_argument("rational_reconstruct: max_den must be >= 1");
  if (tol.sign() <= 0) throw std::invalid_argument("rational_reconstruct: tol must be > 0");
  PrecisionContext ctx = x.context();
  Real r = x;
  BigInt h_prev(1), h_prev2(0);  // numerators h_{-1}=1, h_{-2}=0
  BigInt k_prev(0), k_prev2(1);  // denominators k_{-1}=0, k_{-2}=1
  // Remainders smaller than this carry no reliable information.
  Real exhausted = pow10(-(ctx.digits - 5), ctx);
  for (int iter = 0; iter < 4 * ctx.digits; ++iter) {
    BigInt a = r.floor();
    BigInt h = a * h_prev + h_prev2;
    BigInt k = a * k_prev + k_prev2;
    if (k > max_den) return std::nullopt;
    Rational candidate{h, k};
    candidate.canonicalize();
    Real err = (x - Real(candidate, ctx)).abs();
    if (err < tol) return candidate;
    Real frac = r - Real(a, ctx);
    if (frac < exhausted) return std::nullopt;  // value exhausted without a hit
    r = Real(1, ctx) / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

}  // namespace nahm
