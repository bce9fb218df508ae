#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nahm/asymptotics.hpp"
#include "nahm/corpus.hpp"

namespace nahm {

/// Inclusive arithmetic grid lo, lo+step, ..., hi for one B coordinate.
struct GridAxis {
  Rational lo;
  Rational hi;
  Rational step = Rational(1);

  std::vector<Rational> values() const;
};

/// Exponent-perturbation search over one family.
///
/// The first term's additive constant is fixed to 0 (an overall q^C absorbs
/// it); later terms draw an integer shift from [cprime_lo, cprime_hi].
struct SearchSpec {
  std::string family;
  std::vector<std::vector<Rational>> A;
  std::vector<int> J;
  int n_terms = 1;                           // 1..3
  std::vector<std::vector<GridAxis>> b_grid; // [term][coordinate]
  long cprime_lo = 0;
  long cprime_hi = 6;
  int P = 4;
  int digits_screen = 60;
  int digits_confirm = 120;
  // |L_p| bound for a pass; when absent, each stage uses 10^-(digits/3).
  std::optional<std::string> tol;
  int threads = 1;

  static SearchSpec for_family(const std::string& name, int n_terms, const Rational& lo,
                               const Rational& hi, const Rational& step = Rational(1));
  void validate() const;
};

/// One grid point with residuals and verdict.
struct CandidateRecord {
  explicit CandidateRecord(const PrecisionContext& ctx) : Cstar(ctx), lambda(ctx) {}

  std::string family;
  std::vector<std::vector<Rational>> B;  // per term
  std::vector<long> Cprime;              // per term; first is always 0
  std::vector<Real> L;                   // L[p-1] = L_p, p = 1..P
  Real Cstar;                            // == L_1
  Real lambda;
  std::optional<Rational> alpha_over_pi2;
  bool degenerate = false;
  bool passed = false;
};

/// Scan every grid tuple in lexicographic order. Family constants are
/// computed once per precision stage; screening hits are re-confirmed at
/// the confirmation precision, which decides `passed`. Output order and
/// values are independent of the thread count.
std::vector<CandidateRecord> scan(const SearchSpec& spec);

/// Continued-fraction reconstruction of alpha / pi^2.
std::optional<Rational> alpha_rationality(const Real& alpha, const BigInt& max_den,
                                          const Real& tol);

enum class DilogIdentity { cap, mod9 };

/// Residual of the family's dilogarithm identity:
/// cap:  |L(1/4) + (1/3) L(1/9) - pi^2/18|
/// mod9: |L(Q_1) + (1/3) L(Q_2^3) - 4 pi^2/27| with Q from the Q-system.
Real dilog_check(DilogIdentity which, const PrecisionContext& ctx);

struct FormResult {
  bool matched = false;
  std::optional<long> first_mismatch;
};

struct IdentityResult {
  std::string name;
  std::vector<FormResult> forms;        // one per sum form
  bool enumeration_checked = false;     // combinatorial cross-check ran
  bool enumeration_matched = false;
  std::optional<long> enumeration_mismatch;
  bool all_matched() const;
};

/// Expand every sum form and the product side to order N and compare;
/// additionally cross-check the first sum form against the combinatorial
/// enumeration up to min(N, enum_cap) (0 disables the cross-check).
/// A mismatch is reported, not thrown.
std::vector<IdentityResult> verify_identities(const std::vector<Identity>& identities, long order,
                                              long enum_cap = 60);

struct PolyResidual {
  std::string name;
  Real residual;
};

/// Algebraic residuals of the mod-9 constants: the Q_1 cubic, the Q_2
/// nonic, the two xi cubics, the two trigonometric closed forms, plus the
/// rational Capparelli analogues.
std::vector<PolyResidual> minimal_poly_check(const PrecisionContext& ctx);

}  // namespace nahm
