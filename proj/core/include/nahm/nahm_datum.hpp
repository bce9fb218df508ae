#pragma once

#include <vector>

#include "nahm/precision.hpp"

namespace nahm {

/// One Nahm-type sum: q^{n^T A n / 2 + n^T B + C} / prod_i (q^{J_i}; q^{J_i})_{n_i}
/// summed over integer vectors n with n_i >= lower_i.
struct NahmDatum {
  int k = 0;
  std::vector<std::vector<Rational>> A;  // k x k, symmetric positive definite
  std::vector<Rational> B;               // k
  Rational C = Rational(0);
  std::vector<int> J;                    // k, each >= 1
  std::vector<long> lower;               // k, each >= 0

  static NahmDatum make(std::vector<std::vector<Rational>> A, std::vector<Rational> B,
                        Rational C, std::vector<int> J, std::vector<long> lower = {});

  /// Checks shape, symmetry, J_i >= 1, lower_i >= 0 and positive
  /// definiteness (leading principal minors); throws std::invalid_argument.
  void validate() const;

  Rational exponent(const std::vector<long>& n) const;
};

/// Leading-principal-minor test for symmetric rational matrices.
bool positive_definite(const std::vector<std::vector<Rational>>& A);

/// Exact inverse by Gauss-Jordan elimination; throws on singular input.
std::vector<std::vector<Rational>> rational_inverse(const std::vector<std::vector<Rational>>& A);

Rational rational_det(std::vector<std::vector<Rational>> A);

}  // namespace nahm
