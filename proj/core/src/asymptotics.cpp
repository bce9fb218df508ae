#include "nahm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nahm/special.hpp"

namespace nahm {

namespace {

Rational factorial(int n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

std::vector<int> unit_tuple(int k, int axis, int degree) {
  std::vector<int> e(static_cast<size_t>(k), 0);
  e[static_cast<size_t>(axis)] = degree;
  return e;
}

// ---- double-precision Newton prefilter ------------------------------------

struct DoubleSystem {
  std::vector<std::vector<double>> A;
  std::vector<int> J;
  int k;

  // residual G_i = ln(1 - Q_i^{J_i}) - sum_j A_{ji} ln Q_j; returns +inf
  // outside the domain.
  double residual(const std::vector<double>& Q, std::vector<double>* G) const {
    double worst = 0;
    for (int i = 0; i < k; ++i) {
      double qi = Q[static_cast<size_t>(i)];
      if (!(qi > 0.0 && qi < 1.0)) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < k; ++i) {
      double qj = std::pow(Q[static_cast<size_t>(i)], J[static_cast<size_t>(i)]);
      if (!(qj < 1.0)) return std::numeric_limits<double>::infinity();
      double g = std::log1p(-qj);
      for (int j = 0; j < k; ++j) {
        g -= A[static_cast<size_t>(j)][static_cast<size_t>(i)] *
             std::log(Q[static_cast<size_t>(j)]);
      }
      if (G) (*G)[static_cast<size_t>(i)] = g;
      worst = std::max(worst, std::fabs(g));
    }
    return worst;
  }

  void jacobian(const std::vector<double>& Q, std::vector<std::vector<double>>& Jac) const {
    for (int i = 0; i < k; ++i) {
      double qi = Q[static_cast<size_t>(i)];
      double qj = std::pow(qi, J[static_cast<size_t>(i)]);
      for (int j = 0; j < k; ++j) {
        double v = -A[static_cast<size_t>(j)][static_cast<size_t>(i)] / Q[static_cast<size_t>(j)];
        if (i == j) {
          v -= J[static_cast<size_t>(i)] * std::pow(qi, J[static_cast<size_t>(i)] - 1) / (1.0 - qj);
        }
        Jac[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
      }
    }
  }
};

bool solve_linear_double(std::vector<std::vector<double>> M, std::vector<double> rhs,
                         std::vector<double>& out) {
  size_t n = M.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::fabs(M[r][col]) > std::fabs(M[pivot][col])) pivot = r;
    }
    if (M[pivot][col] == 0.0) return false;
    std::swap(M[pivot], M[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col] == 0.0) continue;
      double f = M[r][col] / M[col][col];
      for (size_t j = col; j < n; ++j) M[r][j] -= f * M[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  out.resize(n);
  for (size_t i = 0; i < n; ++i) out[i] = rhs[i] / M[i][i];
  return true;
}

bool newton_double(const DoubleSystem& sys, std::vector<double>& Q) {
  std::vector<double> G(static_cast<size_t>(sys.k));
  std::vector<std::vector<double>> Jac(static_cast<size_t>(sys.k),
                                       std::vector<double>(static_cast<size_t>(sys.k)));
  double res = sys.residual(Q, &G);
  if (!std::isfinite(res)) return false;
  for (int iter = 0; iter < 200; ++iter) {
    if (res < 1e-12) return true;
    sys.jacobian(Q, Jac);
    std::vector<double> neg(G);
    for (double& v : neg) v = -v;
    std::vector<double> step;
    if (!solve_linear_double(Jac, neg, step)) return false;
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h < 60; ++h) {
      std::vector<double> trial(Q);
      for (int i = 0; i < sys.k; ++i) trial[static_cast<size_t>(i)] += scale * step[static_cast<size_t>(i)];
      double trial_res = sys.residual(trial, &G);
      if (trial_res < res) {
        Q = trial;
        res = trial_res;
        improved = true;
        break;
      }
      scale /= 2;
    }
    if (!improved) return res < 1e-10;
  }
  return res < 1e-10;
}

// ---- Real linear algebra (k <= 4 in practice) ------------------------------

std::vector<Real> solve_linear_real(std::vector<std::vector<Real>> M, std::vector<Real> rhs) {
  size_t n = M.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col].abs() > M[pivot][col].abs()) pivot = r;
    }
    if (M[pivot][col].is_zero()) throw std::domain_error("solve_linear_real: singular matrix");
    std::swap(M[pivot], M[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      if (M[r][col].is_zero()) continue;
      Real f = M[r][col] / M[col][col];
      for (size_t j = col; j < n; ++j) M[r][j] -= f * M[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Real> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(rhs[i] / M[i][i]);
  return out;
}

Real det_real(std::vector<std::vector<Real>> M) {
  size_t n = M.size();
  PrecisionContext ctx = M[0][0].context();
  Real det(1, ctx);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col].abs() > M[pivot][col].abs()) pivot = r;
    }
    if (M[pivot][col].is_zero()) return Real(ctx);
    if (pivot != col) {
      std::swap(M[pivot], M[col]);
      det = -det;
    }
    det *= M[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col].is_zero()) continue;
      Real f = M[r][col] / M[col][col];
      for (size_t j = col; j < n; ++j) M[r][j] -= f * M[col][j];
    }
  }
  return det;
}

// Unpivoted Gauss-Jordan for symmetric positive definite input; positive
// pivots double as the definiteness check.
std::vector<std::vector<Real>> inverse_spd(const std::vector<std::vector<Real>>& M) {
  size_t n = M.size();
  PrecisionContext ctx = M[0][0].context();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (M[i][j] != M[j][i]) throw std::domain_error("inverse_spd: matrix not symmetric");
    }
  }
  std::vector<std::vector<Real>> aug(n, std::vector<Real>(2 * n, Real(ctx)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = M[i][j];
    aug[i][n + i] = Real(1, ctx);
  }
  for (size_t col = 0; col < n; ++col) {
    if (aug[col][col].sign() <= 0) {
      throw std::domain_error("inverse_spd: matrix not positive definite");
    }
    Real inv = Real(1, ctx) / aug[col][col];
    for (size_t j = 0; j < 2 * n; ++j) aug[col][j] *= inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || aug[r][col].is_zero()) continue;
      Real f = aug[r][col];
      for (size_t j = 0; j < 2 * n; ++j) aug[r][j] -= f * aug[col][j];
    }
  }
  std::vector<std::vector<Real>> out(n, std::vector<Real>(n, Real(ctx)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  }
  return out;
}

// Newton refinement of a double-precision root at one working precision.
std::vector<Real> refine_root(const std::vector<std::vector<Rational>>& A,
                              const std::vector<int>& J, std::vector<Real> Q,
                              const PrecisionContext& ctx) {
  int k = static_cast<int>(J.size());
  Real one(1, ctx);
  Real target = pow10(-(ctx.digits + 5), ctx);
  auto eval = [&](const std::vector<Real>& q, std::vector<Real>& G) -> Real {
    Real worst(ctx);
    for (int i = 0; i < k; ++i) {
      Real qj = q[static_cast<size_t>(i)].pow(J[static_cast<size_t>(i)]);
      Real g = (one - qj).ln();
      for (int j = 0; j < k; ++j) {
        g -= Real(A[static_cast<size_t>(j)][static_cast<size_t>(i)], ctx) *
             q[static_cast<size_t>(j)].ln();
      }
      G[static_cast<size_t>(i)] = g;
      Real a = g.abs();
      if (a > worst) worst = a;
    }
    return worst;
  };
  std::vector<Real> G(static_cast<size_t>(k), Real(ctx));
  Real res = eval(Q, G);
  for (int iter = 0; iter < 80; ++iter) {
    if (res < target) break;
    std::vector<std::vector<Real>> Jac(static_cast<size_t>(k),
                                       std::vector<Real>(static_cast<size_t>(k), Real(ctx)));
    for (int i = 0; i < k; ++i) {
      Real qi = Q[static_cast<size_t>(i)];
      Real qj = qi.pow(J[static_cast<size_t>(i)]);
      for (int j = 0; j < k; ++j) {
        Real v = -(Real(A[static_cast<size_t>(j)][static_cast<size_t>(i)], ctx) /
                   Q[static_cast<size_t>(j)]);
        if (i == j) {
          v -= Real(J[static_cast<size_t>(i)], ctx) * qi.pow(J[static_cast<size_t>(i)] - 1) /
               (one - qj);
        }
        Jac[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
      }
    }
    std::vector<Real> rhs;
    rhs.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) rhs.push_back(-G[static_cast<size_t>(i)]);
    std::vector<Real> step = solve_linear_real(Jac, rhs);
    Real scale(1, ctx);
    bool improved = false;
    for (int h = 0; h < 60; ++h) {
      std::vector<Real> trial;
      trial.reserve(static_cast<size_t>(k));
      bool domain_ok = true;
      for (int i = 0; i < k; ++i) {
        Real t = Q[static_cast<size_t>(i)] + scale * step[static_cast<size_t>(i)];
        if (t.sign() <= 0 || t.cmp(1) >= 0) domain_ok = false;
        trial.push_back(std::move(t));
      }
      if (domain_ok) {
        std::vector<Real> Gt(static_cast<size_t>(k), Real(ctx));
        Real rt = eval(trial, Gt);
        if (rt < res) {
          Q = std::move(trial);
          G = std::move(Gt);
          res = rt;
          improved = true;
          break;
        }
      }
      scale = scale / Real(2, ctx);
    }
    if (!improved) break;
  }
  return Q;
}

}  // namespace

// ---- TPolynomial ------------------------------------------------------------

void TPolynomial::add_term(const std::vector<int>& expo, const Real& coeff) {
  if (static_cast<int>(expo.size()) != k_) {
    throw std::invalid_argument("TPolynomial: exponent tuple arity mismatch");
  }
  auto it = terms_.find(expo);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(expo, coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TPolynomial TPolynomial::operator+(const TPolynomial& o) const {
  TPolynomial out(*this);
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

TPolynomial TPolynomial::operator*(const TPolynomial& o) const {
  if (o.k_ != k_) throw std::invalid_argument("TPolynomial: arity mismatch");
  TPolynomial out(k_);
  std::vector<int> e(static_cast<size_t>(k_));
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      for (int i = 0; i < k_; ++i) {
        e[static_cast<size_t>(i)] = e1[static_cast<size_t>(i)] + e2[static_cast<size_t>(i)];
      }
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

TPolynomial TPolynomial::scaled(const Real& s) const {
  TPolynomial out(k_);
  for (const auto& [e, c] : terms_) out.add_term(e, c * s);
  return out;
}

int TPolynomial::total_degree() const {
  int best = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int x : e) d += x;
    best = std::max(best, d);
  }
  return best;
}

bool TPolynomial::has_parity(int parity) const {
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int x : e) d += x;
    if ((d - parity) % 2 != 0) return false;
  }
  return true;
}

// ---- solve_Q ----------------------------------------------------------------

std::vector<Real> solve_Q(const std::vector<std::vector<Rational>>& A, const std::vector<int>& J,
                          const PrecisionContext& ctx) {
  int k = static_cast<int>(J.size());
  if (k < 1 || A.size() != J.size()) throw std::invalid_argument("solve_Q: bad dimensions");
  if (!positive_definite(A)) throw std::invalid_argument("solve_Q: A not positive definite");

  DoubleSystem sys;
  sys.k = k;
  sys.J = J;
  sys.A.assign(static_cast<size_t>(k), std::vector<double>(static_cast<size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      sys.A[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          mpq_get_d(A[static_cast<size_t>(i)][static_cast<size_t>(j)].get_mpq_t());
    }
  }

  // multistart over the interior grid {0.1, ..., 0.9}^k
  std::vector<std::vector<double>> roots;
  long total = 1;
  for (int i = 0; i < k; ++i) total *= 9;
  for (long s = 0; s < total; ++s) {
    long v = s;
    std::vector<double> Q(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      Q[static_cast<size_t>(i)] = 0.1 * (1 + v % 9);
      v /= 9;
    }
    if (!newton_double(sys, Q)) continue;
    bool fresh = true;
    for (const auto& r : roots) {
      double sep = 0;
      for (int i = 0; i < k; ++i) {
        sep = std::max(sep, std::fabs(r[static_cast<size_t>(i)] - Q[static_cast<size_t>(i)]));
      }
      if (sep <= 1e-10) {
        fresh = false;
        break;
      }
    }
    if (fresh) roots.push_back(Q);
  }

  if (roots.empty()) {
    throw NoSolutionError("solve_Q: no root found in (0,1)^k after multistart Newton");
  }
  if (roots.size() > 1) {
    std::ostringstream msg;
    msg << "solve_Q: " << roots.size() << " distinct roots in (0,1)^k:";
    for (const auto& r : roots) {
      msg << " (";
      for (int i = 0; i < k; ++i) msg << (i ? "," : "") << r[static_cast<size_t>(i)];
      msg << ")";
    }
    throw NotUniqueError(msg.str());
  }

  // Two refinement passes, half precision then full.
  PrecisionContext half_ctx(std::max(30, ctx.digits / 2));
  std::vector<Real> Q;
  Q.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::ostringstream ss;
    ss.precision(17);
    ss << roots[0][static_cast<size_t>(i)];
    Q.emplace_back(ss.str(), half_ctx);
  }
  Q = refine_root(A, J, std::move(Q), half_ctx);
  for (auto& qi : Q) qi = Real(qi.to_string(), ctx);
  Q = refine_root(A, J, std::move(Q), ctx);

  // accepted roots must satisfy the system to near-full precision
  Real worst(ctx);
  Real one(1, ctx);
  for (int i = 0; i < k; ++i) {
    Real g = (one - Q[static_cast<size_t>(i)].pow(J[static_cast<size_t>(i)])).ln();
    for (int j = 0; j < k; ++j) {
      g -= Real(A[static_cast<size_t>(j)][static_cast<size_t>(i)], ctx) *
           Q[static_cast<size_t>(j)].ln();
    }
    if (g.abs() > worst) worst = g.abs();
  }
  if (worst > pow10(-(ctx.digits - 10), ctx)) {
    throw NoSolutionError("solve_Q: refinement failed to reach context accuracy (residual " +
                          worst.to_string(3) + ")");
  }
  return Q;
}

// ---- Gaussian moments -------------------------------------------------------

GaussianMoments::GaussianMoments(const std::vector<std::vector<Real>>& Atilde)
    : k_(static_cast<int>(Atilde.size())), sigma_(inverse_spd(Atilde)) {}

Real GaussianMoments::moment(const std::vector<int>& m) const {
  if (static_cast<int>(m.size()) != k_) {
    throw std::invalid_argument("GaussianMoments: exponent arity mismatch");
  }
  std::lock_guard<std::mutex> lock(mu_);
  return moment_locked(m);
}

Real GaussianMoments::moment_locked(const std::vector<int>& m) const {
  PrecisionContext ctx = sigma_[0][0].context();
  int total = 0;
  for (int v : m) {
    if (v < 0) throw std::invalid_argument("GaussianMoments: negative exponent");
    total += v;
  }
  if (total == 0) return Real(1, ctx);
  if (total % 2 == 1) return Real(ctx);
  auto it = memo_.find(m);
  if (it != memo_.end()) return it->second;

  int i = 0;
  while (m[static_cast<size_t>(i)] == 0) ++i;
  std::vector<int> rest(m);
  rest[static_cast<size_t>(i)] -= 1;
  Real acc(ctx);
  for (int j = 0; j < k_; ++j) {
    int mult = rest[static_cast<size_t>(j)];
    if (mult == 0) continue;
    std::vector<int> sub(rest);
    sub[static_cast<size_t>(j)] -= 1;
    acc += sigma_[static_cast<size_t>(i)][static_cast<size_t>(j)] * Real(mult, ctx) *
           moment_locked(sub);
  }
  memo_.emplace(m, acc);
  return acc;
}

Real gaussian_moment(const std::vector<std::vector<Real>>& Atilde,
                     const std::vector<int>& exponents) {
  GaussianMoments moments(Atilde);
  return moments.moment(exponents);
}

// ---- towers -----------------------------------------------------------------

namespace {

HalfEpsSeries graded_mul(const HalfEpsSeries& a, const HalfEpsSeries& b, int maxg, int k) {
  HalfEpsSeries out(static_cast<size_t>(maxg) + 1, TPolynomial(k));
  for (int g1 = 0; g1 <= maxg; ++g1) {
    if (a[static_cast<size_t>(g1)].empty()) continue;
    for (int g2 = 0; g1 + g2 <= maxg; ++g2) {
      if (b[static_cast<size_t>(g2)].empty()) continue;
      out[static_cast<size_t>(g1 + g2)] =
          out[static_cast<size_t>(g1 + g2)] +
          a[static_cast<size_t>(g1)] * b[static_cast<size_t>(g2)];
    }
  }
  return out;
}

}  // namespace

std::vector<TPolynomial> d_tower(int axis, int k, const Real& B_i, const Real& xi_i, int J_i,
                                 const Real& Q_i, int P) {
  if (axis < 0 || axis >= k) throw std::invalid_argument("d_tower: axis out of range");
  if (P < 1) throw std::invalid_argument("d_tower: P must be >= 1");
  PrecisionContext ctx = xi_i.context();
  int maxg = 2 * P;
  Real QJ = Q_i.pow(J_i);

  HalfEpsSeries X(static_cast<size_t>(maxg) + 1, TPolynomial(k));
  X[1].add_term(unit_tuple(k, axis, 1), B_i + xi_i / Real(2, ctx));
  for (int pp = 3; pp <= 2 * P + 2; ++pp) {
    BigInt jp;
    mpz_ui_pow_ui(jp.get_mpz_t(), static_cast<unsigned long>(J_i),
                  static_cast<unsigned long>(pp - 1));
    Rational prefactor = Rational(jp) / factorial(pp);
    Real front = -(Real(prefactor, ctx) * polylog_neg(pp - 2, QJ));
    std::vector<Rational> bern = bernoulli_polynomial(pp);
    for (int m = 0; m <= pp; ++m) {
      int grade = 2 * (pp - 1) - m;
      if (grade < 1 || grade > maxg) continue;
      const Rational& b = bern[static_cast<size_t>(m)];
      if (b == 0) continue;
      X[static_cast<size_t>(grade)].add_term(unit_tuple(k, axis, m), front * Real(b, ctx));
    }
  }

  HalfEpsSeries R(static_cast<size_t>(maxg) + 1, TPolynomial(k));
  R[0].add_term(std::vector<int>(static_cast<size_t>(k), 0), Real(1, ctx));
  HalfEpsSeries power = X;
  Rational fact(1);
  for (int j = 1; j <= maxg; ++j) {
    if (j > 1) {
      power = graded_mul(power, X, maxg, k);
      fact *= Rational(j);
    }
    Real inv_fact(Rational(1) / fact, ctx);
    for (int g = j; g <= maxg; ++g) {
      R[static_cast<size_t>(g)] =
          R[static_cast<size_t>(g)] + power[static_cast<size_t>(g)].scaled(inv_fact);
    }
  }

  std::vector<TPolynomial> D;
  D.reserve(static_cast<size_t>(maxg));
  for (int p = 1; p <= maxg; ++p) D.push_back(R[static_cast<size_t>(p)]);
  return D;
}

std::vector<TPolynomial> c_tower(const std::vector<std::vector<TPolynomial>>& towers, int P) {
  if (towers.empty()) throw std::invalid_argument("c_tower: no towers");
  int maxg = 2 * P;
  for (const auto& t : towers) {
    if (static_cast<int>(t.size()) < maxg) {
      throw std::invalid_argument("c_tower: tower shorter than 2P");
    }
  }
  int k = towers[0][0].vars();
  PrecisionContext ctx(30);
  bool found = false;
  for (const auto& t : towers) {
    for (const auto& poly : t) {
      if (!poly.empty()) {
        ctx = poly.terms().begin()->second.context();
        found = true;
        break;
      }
    }
    if (found) break;
  }
  HalfEpsSeries acc(static_cast<size_t>(maxg) + 1, TPolynomial(k));
  acc[0].add_term(std::vector<int>(static_cast<size_t>(k), 0), Real(1, ctx));
  for (const auto& tower : towers) {
    HalfEpsSeries next(static_cast<size_t>(maxg) + 1, TPolynomial(k));
    for (int g = 0; g <= maxg; ++g) {
      if (acc[static_cast<size_t>(g)].empty()) continue;
      // b = 0 contributes the implicit D_0 = 1
      next[static_cast<size_t>(g)] = next[static_cast<size_t>(g)] + acc[static_cast<size_t>(g)];
      for (int b = 1; g + b <= maxg; ++b) {
        const TPolynomial& Db = tower[static_cast<size_t>(b - 1)];
        if (Db.empty()) continue;
        next[static_cast<size_t>(g + b)] =
            next[static_cast<size_t>(g + b)] + acc[static_cast<size_t>(g)] * Db;
      }
    }
    acc = std::move(next);
  }
  std::vector<TPolynomial> C;
  C.reserve(static_cast<size_t>(maxg));
  for (int p = 1; p <= maxg; ++p) C.push_back(acc[static_cast<size_t>(p)]);
  return C;
}

std::vector<Real> c_constants(const std::vector<TPolynomial>& ctower,
                              const GaussianMoments& moments, int P) {
  if (static_cast<int>(ctower.size()) < 2 * P) {
    throw std::invalid_argument("c_constants: tower shorter than 2P");
  }
  std::vector<Real> c;
  c.reserve(static_cast<size_t>(P));
  for (int p = 1; p <= P; ++p) {
    const TPolynomial& poly = ctower[static_cast<size_t>(2 * p - 1)];
    Real acc(PrecisionContext(30));
    bool first = true;
    for (const auto& [e, coeff] : poly.terms()) {
      Real contribution = coeff * moments.moment(e);
      if (first) {
        acc = std::move(contribution);
        first = false;
      } else {
        acc += contribution;
      }
    }
    if (first) acc = Real(moments.covariance()[0][0].context());
    c.push_back(std::move(acc));
  }
  return c;
}

// ---- NahmFamily ---------------------------------------------------------------

NahmFamily::NahmFamily(std::vector<std::vector<Rational>> A, std::vector<int> J, int P,
                       const PrecisionContext& ctx)
    : k_(static_cast<int>(J.size())), P_(P), ctx_(ctx), A_(std::move(A)), J_(std::move(J)),
      detAtilde_(ctx), alpha_(ctx), gamma0_(ctx) {
  if (P_ < 1 || P_ > 6) throw std::invalid_argument("NahmFamily: P must be in [1,6]");
  Q_ = solve_Q(A_, J_, ctx_);
  Real one(1, ctx_);
  Real pi = Real::pi(ctx_);
  Real pi2_6 = pi * pi / Real(6, ctx_);
  QJ_.reserve(static_cast<size_t>(k_));
  xi_.reserve(static_cast<size_t>(k_));
  Real alpha(ctx_);
  Real gamma0(ctx_);
  for (int i = 0; i < k_; ++i) {
    Real qj = Q_[static_cast<size_t>(i)].pow(J_[static_cast<size_t>(i)]);
    QJ_.push_back(qj);
    Real denom = one - qj;
    xi_.push_back(Real(J_[static_cast<size_t>(i)], ctx_) * qj / denom);
    alpha += (pi2_6 - rogers_dilog(qj)) / Real(J_[static_cast<size_t>(i)], ctx_);
    gamma0 += Real(J_[static_cast<size_t>(i)], ctx_) * (one + qj) / denom;
  }
  alpha_ = alpha;
  gamma0_ = gamma0 / Real(24, ctx_);
  Atilde_.assign(static_cast<size_t>(k_), std::vector<Real>(static_cast<size_t>(k_), Real(ctx_)));
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      Atilde_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          Real(A_[static_cast<size_t>(i)][static_cast<size_t>(j)], ctx_);
    }
    Atilde_[static_cast<size_t>(i)][static_cast<size_t>(i)] += xi_[static_cast<size_t>(i)];
  }
  detAtilde_ = det_real(Atilde_);
  if (detAtilde_.sign() <= 0) throw std::domain_error("NahmFamily: det(Atilde) not positive");
  moments_ = std::make_shared<GaussianMoments>(Atilde_);
  tower_cache_.resize(static_cast<size_t>(k_));
}

const std::vector<TPolynomial>& NahmFamily::tower_for(int axis, const Rational& B_i) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& cache = tower_cache_[static_cast<size_t>(axis)];
  auto it = cache.find(B_i);
  if (it == cache.end()) {
    it = cache
             .emplace(B_i, d_tower(axis, k_, Real(B_i, ctx_), xi_[static_cast<size_t>(axis)],
                                   J_[static_cast<size_t>(axis)], Q_[static_cast<size_t>(axis)],
                                   P_))
             .first;
  }
  return it->second;
}

Real NahmFamily::beta(const std::vector<Rational>& B) const {
  if (static_cast<int>(B.size()) != k_) throw std::invalid_argument("beta: bad B arity");
  Real one(1, ctx_);
  // sqrt(prod J_i) normalizes the J_i-step lattice sums (1 when every J_i = 1);
  // without it, F(q) = G(q^J) reductions disagree with the classical constant.
  long jprod = 1;
  for (int i = 0; i < k_; ++i) jprod *= J_[static_cast<size_t>(i)];
  Real out = Real(jprod, ctx_).sqrt() * detAtilde_.pow(make_rational(-1, 2));
  for (int i = 0; i < k_; ++i) {
    out *= Q_[static_cast<size_t>(i)].pow(B[static_cast<size_t>(i)]);
    out *= (one - QJ_[static_cast<size_t>(i)]).pow(make_rational(-1, 2));
  }
  return out;
}

TermAsymptotics NahmFamily::term(const std::vector<Rational>& B, const Rational& C) const {
  if (static_cast<int>(B.size()) != k_) throw std::invalid_argument("term: bad B arity");
  std::vector<std::vector<TPolynomial>> towers;
  towers.reserve(static_cast<size_t>(k_));
  for (int i = 0; i < k_; ++i) towers.push_back(tower_for(i, B[static_cast<size_t>(i)]));
  std::vector<TPolynomial> ct = c_tower(towers, P_);
  TermAsymptotics out{beta(B), Real(C, ctx_) + gamma0_, c_constants(ct, *moments_, P_)};
  return out;
}

// ---- profile-level entry points ---------------------------------------------

AsymptoticProfile build_profile(const NahmDatum& d, int P, const PrecisionContext& ctx) {
  d.validate();
  NahmFamily family(d.A, d.J, P, ctx);
  TermAsymptotics t = family.term(d.B, d.C);
  AsymptoticProfile prof{family.Q(),     family.xi(),  family.Atilde(), family.detAtilde(),
                         family.alpha(), t.beta,       t.gamma,         t.c,
                         P};
  return prof;
}

Real asymptotic_eval(const AsymptoticProfile& profile, const Real& eps) {
  if (eps.sign() <= 0) throw std::domain_error("asymptotic_eval: eps must be positive");
  PrecisionContext ctx = eps.context();
  Real poly(1, ctx);
  Real epow(1, ctx);
  for (int p = 1; p <= profile.P; ++p) {
    epow *= eps;
    poly += profile.c[static_cast<size_t>(p - 1)] * epow;
  }
  return profile.beta * (profile.alpha / eps).exp() * (-(profile.gamma * eps)).exp() * poly;
}

ResidualReport modularity_residuals(const std::vector<TermAsymptotics>& terms, int P) {
  if (terms.empty()) throw std::invalid_argument("modularity_residuals: no terms");
  for (const auto& t : terms) {
    if (static_cast<int>(t.c.size()) < P) {
      throw std::invalid_argument("modularity_residuals: term with fewer than P constants");
    }
  }
  PrecisionContext ctx = terms[0].beta.context();
  std::vector<Real> S(static_cast<size_t>(P) + 1, Real(ctx));
  Real beta_mass(ctx);
  for (const auto& t : terms) {
    beta_mass += t.beta.abs();
    // exp(-gamma eps) * (1 + sum c_p eps^p), Cauchy product
    std::vector<Real> gpow(static_cast<size_t>(P) + 1, Real(1, ctx));
    for (int p = 1; p <= P; ++p) {
      gpow[static_cast<size_t>(p)] = gpow[static_cast<size_t>(p - 1)] * (-t.gamma);
    }
    for (int p = 0; p <= P; ++p) {
      Real acc(ctx);
      for (int j = 0; j <= p; ++j) {
        Real cj = j == 0 ? Real(1, ctx) : t.c[static_cast<size_t>(j - 1)];
        acc += cj * gpow[static_cast<size_t>(p - j)] *
               Real(Rational(1) / factorial(p - j), ctx);
      }
      S[static_cast<size_t>(p)] += t.beta * acc;
    }
  }
  if (S[0].abs() < pow10(-(ctx.digits / 2), ctx) * beta_mass) {
    throw DegenerateSumError("modularity_residuals: leading coefficient vanishes");
  }
  std::vector<Real> u(static_cast<size_t>(P) + 1, Real(ctx));
  for (int p = 1; p <= P; ++p) u[static_cast<size_t>(p)] = S[static_cast<size_t>(p)] / S[0];
  std::vector<Real> L(static_cast<size_t>(P), Real(ctx));
  for (int p = 1; p <= P; ++p) {
    Real acc = u[static_cast<size_t>(p)];
    for (int j = 1; j < p; ++j) {
      acc -= Real(j, ctx) * L[static_cast<size_t>(j - 1)] * u[static_cast<size_t>(p - j)] /
             Real(p, ctx);
    }
    L[static_cast<size_t>(p - 1)] = acc;
  }
  return ResidualReport{S[0], std::move(L)};
}

Real solve_C(const NahmDatum& d, const PrecisionContext& ctx) {
  d.validate();
  NahmFamily family(d.A, d.J, 1, ctx);
  TermAsymptotics t = family.term(d.B, Rational(0));
  return t.c[0] - family.gamma0();
}

Real product_alpha(int pairs, int modulus, const PrecisionContext& ctx) {
  if (pairs < 0) throw std::invalid_argument("product_alpha: pairs must be >= 0");
  if (modulus < 1) throw std::invalid_argument("product_alpha: modulus must be >= 1");
  Real pi = Real::pi(ctx);
  return Real(pairs, ctx) * pi * pi / Real(3 * modulus, ctx);
}

}  // namespace nahm
