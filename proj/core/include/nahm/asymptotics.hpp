#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nahm/nahm_datum.hpp"
#include "nahm/precision.hpp"

namespace nahm {

struct NoSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotUniqueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Polynomial in t_1..t_k with Real coefficients, keyed by exponent tuple.
class TPolynomial {
 public:
  explicit TPolynomial(int k) : k_(k) {}

  int vars() const { return k_; }
  bool empty() const { return terms_.empty(); }
  const std::map<std::vector<int>, Real>& terms() const { return terms_; }

  void add_term(const std::vector<int>& expo, const Real& coeff);
  TPolynomial operator+(const TPolynomial& o) const;
  TPolynomial operator*(const TPolynomial& o) const;
  TPolynomial scaled(const Real& s) const;

  /// Largest total degree among monomials (0 for the empty polynomial).
  int total_degree() const;
  /// True when every monomial's total degree is congruent to `parity` mod 2.
  bool has_parity(int parity) const;

 private:
  int k_;
  std::map<std::vector<int>, Real> terms_;
};

/// Coefficients of a series in sqrt(eps): index p holds the polynomial
/// multiplying eps^{p/2}. Index 0 of a generating expansion is the
/// constant 1.
using HalfEpsSeries = std::vector<TPolynomial>;

/// Unique root of the system 1 - Q_i^{J_i} = prod_j Q_j^{A_{ji}} in
/// (0,1)^k: damped Newton multistart on the 0.1..0.9 grid in double
/// precision, then precision-doubling refinement to full context accuracy.
/// Throws NoSolutionError / NotUniqueError with diagnostics.
std::vector<Real> solve_Q(const std::vector<std::vector<Rational>>& A, const std::vector<int>& J,
                          const PrecisionContext& ctx);

/// Derived constants of one Nahm sum.
struct AsymptoticProfile {
  std::vector<Real> Q;
  std::vector<Real> xi;
  std::vector<std::vector<Real>> Atilde;
  Real detAtilde;
  Real alpha;
  Real beta;
  Real gamma;
  std::vector<Real> c;  // c[p-1] = c_p, p = 1..P
  int P = 0;
};

/// Per-term expansion data entering a combined modularity test.
struct TermAsymptotics {
  Real beta;
  Real gamma;
  std::vector<Real> c;  // c[p-1] = c_p
};

/// Central Gaussian moments E[prod t_i^{m_i}] with covariance Atilde^{-1},
/// via the Isserlis recursion with memoization. Thread-safe.
class GaussianMoments {
 public:
  explicit GaussianMoments(const std::vector<std::vector<Real>>& Atilde);

  int vars() const { return k_; }
  Real moment(const std::vector<int>& m) const;
  const std::vector<std::vector<Real>>& covariance() const { return sigma_; }

 private:
  Real moment_locked(const std::vector<int>& m) const;

  int k_;
  std::vector<std::vector<Real>> sigma_;
  mutable std::map<std::vector<int>, Real> memo_;
  mutable std::mutex mu_;
};

Real gaussian_moment(const std::vector<std::vector<Real>>& Atilde,
                     const std::vector<int>& exponents);

/// D-polynomial tower for one axis: D_1..D_{2P} of the generating series
/// exp((B_i + xi_i/2) t sqrt(eps)
///     - sum_{p>=3} (J_i^{p-1}/p!) Li_{2-p}(Q_i^{J_i}) Bern_p(t/sqrt(eps)) eps^{p-1}).
/// Bernoulli orders above 2P+2 cannot reach eps^P and are dropped.
std::vector<TPolynomial> d_tower(int axis, int k, const Real& B_i, const Real& xi_i, int J_i,
                                 const Real& Q_i, int P);

/// C_p = sum over compositions p_1+..+p_k = p of prod_i D^{(i)}_{p_i}
/// (with D_0 = 1); returns C_1..C_{2P}.
std::vector<TPolynomial> c_tower(const std::vector<std::vector<TPolynomial>>& towers, int P);

/// c_p = E[C_{2p}] under the Atilde-Gaussian, p = 1..P.
std::vector<Real> c_constants(const std::vector<TPolynomial>& ctower,
                              const GaussianMoments& moments, int P);

/// Shared engine for one (A, J) pair: the Q-system solution, derived
/// constants and cached towers/moments, reused across many B vectors.
class NahmFamily {
 public:
  NahmFamily(std::vector<std::vector<Rational>> A, std::vector<int> J, int P,
             const PrecisionContext& ctx);

  int k() const { return k_; }
  int order() const { return P_; }
  const PrecisionContext& context() const { return ctx_; }
  const std::vector<std::vector<Rational>>& A() const { return A_; }
  const std::vector<int>& J() const { return J_; }
  const std::vector<Real>& Q() const { return Q_; }
  const std::vector<Real>& QJ() const { return QJ_; }
  const std::vector<Real>& xi() const { return xi_; }
  const std::vector<std::vector<Real>>& Atilde() const { return Atilde_; }
  const Real& detAtilde() const { return detAtilde_; }
  const Real& alpha() const { return alpha_; }
  /// B- and C-independent part of gamma: (1/24) sum_i J_i (1+Q^J)/(1-Q^J).
  const Real& gamma0() const { return gamma0_; }
  const GaussianMoments& moments() const { return *moments_; }

  Real beta(const std::vector<Rational>& B) const;
  /// Full per-term data for exponent perturbation B and additive shift C.
  TermAsymptotics term(const std::vector<Rational>& B, const Rational& C) const;

 private:
  const std::vector<TPolynomial>& tower_for(int axis, const Rational& B_i) const;

  int k_;
  int P_;
  PrecisionContext ctx_;
  std::vector<std::vector<Rational>> A_;
  std::vector<int> J_;
  std::vector<Real> Q_, QJ_, xi_;
  std::vector<std::vector<Real>> Atilde_;
  Real detAtilde_, alpha_, gamma0_;
  std::shared_ptr<GaussianMoments> moments_;
  mutable std::mutex mu_;
  mutable std::vector<std::map<Rational, std::vector<TPolynomial>>> tower_cache_;
};

AsymptoticProfile build_profile(const NahmDatum& d, int P, const PrecisionContext& ctx);

/// Truncated right side of the expansion:
/// beta * exp(alpha/eps) * exp(-gamma*eps) * (1 + sum_{p<=P} c_p eps^p).
Real asymptotic_eval(const AsymptoticProfile& profile, const Real& eps);

struct ResidualReport {
  Real lambda;          // S_0 = sum of term betas
  std::vector<Real> L;  // L[p-1] = L_p, p = 1..P
};

/// Combined-series residuals: with S(eps) = sum_m beta_m e^{-gamma_m eps}
/// (1 + sum c_{p,m} eps^p), returns lambda = S_0 and the coefficients of
/// ln(S/S_0). Modularity candidates need |L_p| small for p >= 2; the
/// required overall prefactor exponent is C* = L_1. Throws
/// DegenerateSumError when the betas cancel.
ResidualReport modularity_residuals(const std::vector<TermAsymptotics>& terms, int P);

/// The C value forced by the first constraint: c_1 (computed with C = 0)
/// minus (1/24) sum_i J_i (1+Q^J)/(1-Q^J). The datum's own C is ignored.
Real solve_C(const NahmDatum& d, const PrecisionContext& ctx);

/// Growth exponent of a symmetric Pochhammer product with `pairs` pairs of
/// congruences modulo `modulus`: pairs * pi^2 / (3 * modulus).
Real product_alpha(int pairs, int modulus, const PrecisionContext& ctx);

}  // namespace nahm
