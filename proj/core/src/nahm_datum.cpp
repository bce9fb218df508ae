#include "nahm/nahm_datum.hpp"

#include <stdexcept>

namespace nahm {

NahmDatum NahmDatum::make(std::vector<std::vector<Rational>> A, std::vector<Rational> B,
                          Rational C, std::vector<int> J, std::vector<long> lower) {
  NahmDatum d;
  d.k = static_cast<int>(A.size());
  d.A = std::move(A);
  d.B = std::move(B);
  d.C = std::move(C);
  d.J = std::move(J);
  d.lower = lower.empty() ? std::vector<long>(static_cast<size_t>(d.k), 0) : std::move(lower);
  d.validate();
  return d;
}

void NahmDatum::validate() const {
  size_t n = static_cast<size_t>(k);
  if (k < 1) throw std::invalid_argument("NahmDatum: dimension must be >= 1");
  if (A.size() != n || B.size() != n || J.size() != n || lower.size() != n) {
    throw std::invalid_argument("NahmDatum: inconsistent dimensions");
  }
  for (size_t i = 0; i < n; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("NahmDatum: A is not square");
    for (size_t j = 0; j < n; ++j) {
      if (A[i][j] != A[j][i]) throw std::invalid_argument("NahmDatum: A is not symmetric");
    }
    if (J[i] < 1) throw std::invalid_argument("NahmDatum: J entries must be >= 1");
    if (lower[i] < 0) throw std::invalid_argument("NahmDatum: lower bounds must be >= 0");
  }
  if (!positive_definite(A)) {
    throw std::invalid_argument("NahmDatum: A is not positive definite");
  }
}

Rational NahmDatum::exponent(const std::vector<long>& n) const {
  Rational e = C;
  for (int i = 0; i < k; ++i) {
    e += B[static_cast<size_t>(i)] * Rational(n[static_cast<size_t>(i)]);
    for (int j = 0; j < k; ++j) {
      e += A[static_cast<size_t>(i)][static_cast<size_t>(j)] *
           Rational(n[static_cast<size_t>(i)]) * Rational(n[static_cast<size_t>(j)]) /
           Rational(2);
    }
  }
  return e;
}

bool positive_definite(const std::vector<std::vector<Rational>>& A) {
  size_t n = A.size();
  for (size_t m = 1; m <= n; ++m) {
    std::vector<std::vector<Rational>> minor(m, std::vector<Rational>(m));
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) minor[i][j] = A[i][j];
    }
    if (rational_det(std::move(minor)) <= 0) return false;
  }
  return true;
}

Rational rational_det(std::vector<std::vector<Rational>> A) {
  size_t n = A.size();
  Rational det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && A[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(A[pivot], A[col]);
      det = -det;
    }
    det *= A[col][col];
    Rational inv = Rational(1) / A[col][col];
    for (size_t row = col + 1; row < n; ++row) {
      if (A[row][col] == 0) continue;
      Rational f = A[row][col] * inv;
      for (size_t j = col; j < n; ++j) A[row][j] -= f * A[col][j];
    }
  }
  return det;
}

std::vector<std::vector<Rational>> rational_inverse(const std::vector<std::vector<Rational>>& A) {
  size_t n = A.size();
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(2 * n, Rational(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = A[i][j];
    aug[i][n + i] = 1;
  }
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && aug[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::domain_error("rational_inverse: singular matrix");
    if (pivot != col) std::swap(aug[pivot], aug[col]);
    Rational inv = Rational(1) / aug[col][col];
    for (size_t j = 0; j < 2 * n; ++j) aug[col][j] *= inv;
    for (size_t row = 0; row < n; ++row) {
      if (row == col || aug[row][col] == 0) continue;
      Rational f = aug[row][col];
      for (size_t j = 0; j < 2 * n; ++j) aug[row][j] -= f * aug[col][j];
    }
  }
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  }
  return out;
}

}  // namespace nahm
