#include "nahm/nahm_sum.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace nahm {

namespace {

double to_d(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

struct Expander {
  const NahmDatum& d;
  long order;
  std::vector<long> lo, hi;
  std::vector<long> point;
  std::vector<BigInt> acc;
  std::map<std::pair<long, long>, QSeriesTrunc> poch_cache;

  Expander(const NahmDatum& datum, long N) : d(datum), order(N) {
    acc.assign(static_cast<size_t>(N) + 1, BigInt(0));
    point.assign(static_cast<size_t>(d.k), 0);
    compute_box();
  }

  // Complete the square: e(n) <= N forces
  // (n + A^{-1}B)_i^2 <= 2 (N - C + B^T A^{-1} B / 2) * (A^{-1})_{ii}.
  // The float radius gets a unit of slack; the exact exponent filter
  // discards anything the slack lets through.
  void compute_box() {
    auto Ainv = rational_inverse(d.A);
    std::vector<Rational> v(static_cast<size_t>(d.k), Rational(0));
    for (int i = 0; i < d.k; ++i) {
      for (int j = 0; j < d.k; ++j) {
        v[static_cast<size_t>(i)] += Ainv[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                     d.B[static_cast<size_t>(j)];
      }
    }
    Rational btab(0);
    for (int i = 0; i < d.k; ++i) btab += d.B[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    Rational R = Rational(order) - d.C + btab / Rational(2);
    lo.assign(static_cast<size_t>(d.k), 0);
    hi.assign(static_cast<size_t>(d.k), -1);
    if (R < 0) return;  // no lattice point can reach the truncation window
    for (int i = 0; i < d.k; ++i) {
      double rad =
          std::sqrt(2.0 * to_d(R) * to_d(Ainv[static_cast<size_t>(i)][static_cast<size_t>(i)]));
      double center = -to_d(v[static_cast<size_t>(i)]);
      long a = static_cast<long>(std::floor(center - rad)) - 1;
      long b = static_cast<long>(std::ceil(center + rad)) + 1;
      lo[static_cast<size_t>(i)] = std::max(d.lower[static_cast<size_t>(i)], a);
      hi[static_cast<size_t>(i)] = b;
    }
  }

  const QSeriesTrunc& poch(long base, long n) {
    auto key = std::make_pair(base, n);
    auto it = poch_cache.find(key);
    if (it == poch_cache.end()) {
      it = poch_cache.emplace(key, finite_pochhammer_inv(base, n, order)).first;
    }
    return it->second;
  }

  void visit(int axis) {
    if (axis == d.k) {
      add_point();
      return;
    }
    for (long n = lo[static_cast<size_t>(axis)]; n <= hi[static_cast<size_t>(axis)]; ++n) {
      point[static_cast<size_t>(axis)] = n;
      visit(axis + 1);
    }
  }

  void add_point() {
    Rational e = d.exponent(point);
    if (e > order) return;
    if (e < 0) throw std::domain_error("nahm_expand: admissible term with negative exponent");
    if (!is_integer(e)) {
      throw std::domain_error("nahm_expand: non-integer exponent in series context");
    }
    long e0 = static_cast<long>(e.get_num().get_si());
    long room = order - e0;
    QSeriesTrunc term = QSeriesTrunc::one(room);
    for (int i = 0; i < d.k; ++i) {
      long n = point[static_cast<size_t>(i)];
      if (n == 0) continue;
      term = term * poch(d.J[static_cast<size_t>(i)], n).truncated(room);
    }
    for (long j = 0; j <= room; ++j) acc[static_cast<size_t>(e0 + j)] += term.coeff(j);
  }
};

}  // namespace

QSeriesTrunc nahm_expand(const NahmDatum& d, long order) {
  d.validate();
  if (order < 0) throw std::invalid_argument("nahm_expand: negative order");
  if (!is_integer(d.C) || d.C < 0) {
    throw std::domain_error("nahm_expand: C must be a nonnegative integer in series context");
  }
  Expander ex(d, order);
  ex.visit(0);
  return QSeriesTrunc::from_coeffs(std::move(ex.acc));
}

QSeriesTrunc nahm_expand_sum(const std::vector<NahmDatum>& terms, long order) {
  if (terms.empty()) throw std::invalid_argument("nahm_expand_sum: empty term list");
  QSeriesTrunc total(order);
  for (const auto& t : terms) total += nahm_expand(t, order);
  return total;
}

}  // namespace nahm
