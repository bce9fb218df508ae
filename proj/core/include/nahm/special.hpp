#pragma once

#include "nahm/precision.hpp"

namespace nahm {

/// Dilogarithm Li_2(z) = sum_{n>=1} z^n / n^2 for z in [0,1].
///
/// For z > 1/2 the reflection Li_2(z) + Li_2(1-z) = pi^2/6 - ln(z)ln(1-z)
/// keeps the defining series on arguments <= 1/2.
Real li2(const Real& z);

/// Rogers dilogarithm L(z) = Li_2(z) + (1/2) ln(z) ln(1-z) on [0,1],
/// with L(0) = 0 and L(1) = pi^2/6.
Real rogers_dilog(const Real& z);

/// Negative-order polylogarithm Li_{-n}(z) for n >= 0 and z in (0,1).
///
/// Evaluated through the closed rational form P_n(z)/(1-z)^{n+1} where the
/// numerator coefficients are Eulerian numbers; Li_0(z) = z/(1-z).
Real polylog_neg(int n, const Real& z);

/// Coefficients of the Bernoulli polynomial B_p(u), ascending in u,
/// as exact rationals (length p+1). Convention B_1(u) = u - 1/2.
std::vector<Rational> bernoulli_polynomial(int p);

/// Eulerian numbers A(n, 0..n-1) for n >= 1.
std::vector<BigInt> eulerian_row(int n);

/// First continued-fraction convergent p/q of x with q <= max_den and
/// |x - p/q| < tol, or nullopt when no convergent qualifies.
std::optional<Rational> rational_reconstruct(const Real& x, const BigInt& max_den,
                                             const Real& tol);

}  // namespace nahm
