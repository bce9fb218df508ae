#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nahm/precision.hpp"
#include "nahm/special.hpp"

using namespace nahm;

namespace {

const PrecisionContext ctx(120);

Real tolerance(int exp10) { return pow10(exp10, ctx); }

// independent summation of z^n/n^2, used as the li2 oracle
Real li2_sum_oracle(const Real& z, int digits) {
  PrecisionContext wide(digits);
  Real sum(wide);
  Real zpow = z;
  Real cut = pow10(-(digits + 5), wide);
  for (long n = 1;; ++n) {
    Real term = zpow / Real(n * n, wide);
    sum += term;
    if (term < cut) break;
    zpow *= z;
  }
  return sum;
}

}  // namespace

TEST_CASE("Real arithmetic basics and domain errors") {
  Real a(3, ctx), b(make_rational(1, 7), ctx);
  CHECK((a * b - Real(make_rational(3, 7), ctx)).is_zero());
  CHECK((a + b) > a);
  CHECK_THROWS_AS(a / Real(ctx), std::domain_error);
  CHECK_THROWS_AS(Real(0, ctx).ln(), std::domain_error);
  CHECK_THROWS_AS(Real(-1, ctx).ln(), std::domain_error);
  CHECK_THROWS_AS(Real(-1, ctx).sqrt(), std::domain_error);
  CHECK_THROWS_AS(PrecisionContext(20), std::invalid_argument);

  // exp/ln round trip at context accuracy
  Real x(make_rational(17, 5), ctx);
  CHECK((x.ln().exp() - x).abs() < tolerance(-115));

  // decimal string round trip
  Real y(make_rational(-355, 113), ctx);
  CHECK((Real(y.to_string(), ctx) - y).abs() < tolerance(-115));
}

TEST_CASE("li2 boundary and reference values") {
  Real pi = Real::pi(ctx);
  CHECK(li2(Real(0, ctx)).is_zero());
  CHECK((li2(Real(1, ctx)) - pi * pi / Real(6, ctx)).abs() < tolerance(-110));

  // closed form at 1/2 plus the direct-summation oracle at 200 digits
  Real half(make_rational(1, 2), ctx);
  Real closed = pi * pi / Real(12, ctx) - Real(2, ctx).ln().pow(2) / Real(2, ctx);
  CHECK((li2(half) - closed).abs() < tolerance(-110));
  PrecisionContext wide(200);
  Real oracle = li2_sum_oracle(Real(make_rational(1, 2), wide), 200);
  CHECK((li2(half) - Real(oracle.to_string(), ctx)).abs() < tolerance(-110));

  CHECK_THROWS_AS(li2(Real(-1, ctx)), std::domain_error);
  CHECK_THROWS_AS(li2(Real(2, ctx)), std::domain_error);
}

TEST_CASE("li2 agrees with mpfr_li2 on random interior points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.01, 0.99);
  for (int trial = 0; trial < 20; ++trial) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.12f", dist(rng));
    Real z(buf, ctx);
    Real mine = li2(z);
    mpfr_t ref;
    mpfr_init2(ref, z.precision_bits());
    mpfr_li2(ref, z.raw(), MPFR_RNDN);
    Real theirs(ctx);
    {
      char* s = nullptr;
      mpfr_asprintf(&s, "%.130Re", ref);
      theirs = Real(s, ctx);
      mpfr_free_str(s);
    }
    mpfr_clear(ref);
    CHECK((mine - theirs).abs() < tolerance(-110));
  }
}

TEST_CASE("li2 reflection property on 100 random points") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.001, 0.999);
  Real pi = Real::pi(ctx);
  Real bound = tolerance(-(ctx.digits - 10));
  for (int trial = 0; trial < 100; ++trial) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.15f", dist(rng));
    Real z(buf, ctx);
    Real one(1, ctx);
    Real lhs = li2(z) + li2(one - z);
    Real rhs = pi * pi / Real(6, ctx) - z.ln() * (one - z).ln();
    CHECK((lhs - rhs).abs() < bound);
  }
}

TEST_CASE("rogers_dilog boundaries, midpoint, and symmetry") {
  Real pi = Real::pi(ctx);
  CHECK(rogers_dilog(Real(0, ctx)).is_zero());
  CHECK((rogers_dilog(Real(1, ctx)) - pi * pi / Real(6, ctx)).abs() < tolerance(-110));
  CHECK((rogers_dilog(Real(make_rational(1, 2), ctx)) - pi * pi / Real(12, ctx)).abs() <
        tolerance(-110));

  // L(z) + L(1-z) = pi^2/6
  Real z(make_rational(3, 11), ctx);
  CHECK((rogers_dilog(z) + rogers_dilog(Real(1, ctx) - z) - pi * pi / Real(6, ctx)).abs() <
        tolerance(-110));
}

TEST_CASE("polylog_neg closed forms") {
  CHECK((polylog_neg(1, Real(make_rational(1, 2), ctx)) - Real(2, ctx)).abs() < tolerance(-110));
  CHECK((polylog_neg(1, Real(make_rational(3, 4), ctx)) - Real(12, ctx)).abs() < tolerance(-110));
  CHECK((polylog_neg(0, Real(make_rational(3, 4), ctx)) - Real(3, ctx)).abs() < tolerance(-110));
  CHECK_THROWS_AS(polylog_neg(1, Real(0, ctx)), std::domain_error);
  CHECK_THROWS_AS(polylog_neg(1, Real(1, ctx)), std::domain_error);
  CHECK_THROWS_AS(polylog_neg(-1, Real(make_rational(1, 2), ctx)), std::invalid_argument);
}

TEST_CASE("polylog_neg matches direct summation for orders 0..8") {
  // sum_{n<=N} n^m z^n with the tail below the context floor at z <= 0.9
  for (int m = 0; m <= 8; ++m) {
    for (const char* zs : {"0.25", "0.5", "0.75", "0.9"}) {
      Real z(zs, ctx);
      Real sum(ctx);
      Real zpow = z;
      Real cut = pow10(-(ctx.digits + 10), ctx);
      for (long n = 1; n < 40000; ++n) {
        Real nm(1, ctx);
        for (int j = 0; j < m; ++j) nm *= Real(n, ctx);
        Real term = nm * zpow;
        sum += term;
        if (n > 10 && term < cut) break;
        zpow *= z;
      }
      CHECK((polylog_neg(m, z) - sum).abs() < tolerance(-(ctx.digits - 10)));
    }
  }
}

TEST_CASE("bernoulli_polynomial table rows and oracle recursion") {
  CHECK(bernoulli_polynomial(0) == std::vector<Rational>{Rational(1)});
  CHECK(bernoulli_polynomial(1) ==
        std::vector<Rational>{make_rational(-1, 2), Rational(1)});
  CHECK(bernoulli_polynomial(3) ==
        std::vector<Rational>{Rational(0), make_rational(1, 2), make_rational(-3, 2), Rational(1)});

  // B_p(0) equals the standard Bernoulli numbers
  std::vector<Rational> numbers = {Rational(1),         make_rational(-1, 2), make_rational(1, 6),
                                   Rational(0),         make_rational(-1, 30), Rational(0),
                                   make_rational(1, 42)};
  for (int p = 0; p <= 6; ++p) CHECK(bernoulli_polynomial(p)[0] == numbers[static_cast<size_t>(p)]);

  auto eval = [](const std::vector<Rational>& poly, const Rational& u) {
    Rational acc(0);
    for (size_t j = poly.size(); j-- > 0;) acc = acc * u + poly[j];
    return acc;
  };
  for (int p = 0; p <= 10; ++p) {
    auto poly = bernoulli_polynomial(p);
    // oracle: B_p(u+1) - B_p(u) = p u^{p-1} at several integer points
    for (long u = 0; u <= 5; ++u) {
      Rational diff = eval(poly, Rational(u + 1)) - eval(poly, Rational(u));
      Rational expect(0);
      if (p > 0) {
        expect = Rational(p);
        for (int j = 0; j < p - 1; ++j) expect *= Rational(u);
      }
      CHECK(diff == expect);
    }
    if (p >= 2) CHECK(eval(poly, Rational(1)) == eval(poly, Rational(0)));
    if (p >= 1) {
      // d/du B_p = p B_{p-1}
      auto lower = bernoulli_polynomial(p - 1);
      for (int j = 1; j <= p; ++j) {
        CHECK(Rational(j) * poly[static_cast<size_t>(j)] ==
              Rational(p) * lower[static_cast<size_t>(j - 1)]);
      }
    }
  }
}

TEST_CASE("rational_reconstruct examples") {
  Real tol = tolerance(-40);
  BigInt den_bound(1000000);

  auto got = rational_reconstruct(Real(make_rational(1, 18), ctx), den_bound, tol);
  REQUIRE(got.has_value());
  CHECK(*got == make_rational(1, 18));

  got = rational_reconstruct(Real(make_rational(2, 27), ctx), den_bound, tol);
  REQUIRE(got.has_value());
  CHECK(*got == make_rational(2, 27));

  CHECK_FALSE(rational_reconstruct(Real::pi(ctx), BigInt(1000), tol).has_value());
}

TEST_CASE("rational_reconstruct recovers exact small fractions") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<long> num(-500, 500);
  std::uniform_int_distribution<long> den(1, 400);
  Real tol = tolerance(-60);
  for (int trial = 0; trial < 50; ++trial) {
    Rational r = make_rational(num(rng), den(rng));
    auto got = rational_reconstruct(Real(r, ctx), BigInt(1000), tol);
    REQUIRE(got.has_value());
    CHECK(*got == r);
  }
}
