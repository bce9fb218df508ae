#include "nahm/search.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "nahm/nahm_sum.hpp"
#include "nahm/special.hpp"

namespace nahm {

std::vector<Rational> GridAxis::values() const {
  if (step <= 0) throw std::invalid_argument("GridAxis: step must be positive");
  std::vector<Rational> out;
  for (Rational v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

SearchSpec SearchSpec::for_family(const std::string& name, int n_terms, const Rational& lo,
                                  const Rational& hi, const Rational& step) {
  const FamilySpec& fam = nahm::family(name);
  SearchSpec spec;
  spec.family = fam.name;
  spec.A = fam.A;
  spec.J = fam.J;
  spec.n_terms = n_terms;
  GridAxis axis{lo, hi, step};
  spec.b_grid.assign(static_cast<size_t>(n_terms),
                     std::vector<GridAxis>(fam.J.size(), axis));
  return spec;
}

void SearchSpec::validate() const {
  if (n_terms < 1 || n_terms > 3) throw std::invalid_argument("SearchSpec: n_terms must be 1..3");
  if (A.empty() || J.empty() || A.size() != J.size()) {
    throw std::invalid_argument("SearchSpec: missing or inconsistent (A, J)");
  }
  if (!positive_definite(A)) throw std::invalid_argument("SearchSpec: A not positive definite");
  if (b_grid.size() != static_cast<size_t>(n_terms)) {
    throw std::invalid_argument("SearchSpec: need one B grid per term");
  }
  Rational min_step = make_rational(1, 4);
  for (const auto& axes : b_grid) {
    if (axes.size() != J.size()) throw std::invalid_argument("SearchSpec: grid arity mismatch");
    for (const auto& ax : axes) {
      if (ax.step < min_step) throw std::invalid_argument("SearchSpec: step below 1/4");
      if (ax.values().empty()) throw std::invalid_argument("SearchSpec: empty grid axis");
    }
  }
  if (cprime_lo > cprime_hi) throw std::invalid_argument("SearchSpec: empty C' range");
  if (P < 1 || P > 6) throw std::invalid_argument("SearchSpec: P must be in [1,6]");
  if (digits_screen < 30 || digits_confirm < 30) {
    throw std::invalid_argument("SearchSpec: precisions must be >= 30 digits");
  }
  if (threads < 1) throw std::invalid_argument("SearchSpec: threads must be >= 1");
}

namespace {

// Lexicographic tuple space: per-term B vectors (term 0 outermost), then
// one C' digit per term beyond the first.
struct TupleSpace {
  std::vector<std::vector<std::vector<Rational>>> term_bs;  // [term] -> B vectors
  std::vector<long> cprimes;
  int n_terms;

  long size() const {
    long total = 1;
    for (const auto& tb : term_bs) total *= static_cast<long>(tb.size());
    for (int t = 1; t < n_terms; ++t) total *= static_cast<long>(cprimes.size());
    return total;
  }

  // Decodes a linear index into per-term B indices and C' values.
  void decode(long index, std::vector<size_t>& b_idx, std::vector<long>& cprime) const {
    b_idx.assign(static_cast<size_t>(n_terms), 0);
    cprime.assign(static_cast<size_t>(n_terms), 0);
    for (int t = n_terms - 1; t >= 1; --t) {
      long radix = static_cast<long>(cprimes.size());
      cprime[static_cast<size_t>(t)] = cprimes[static_cast<size_t>(index % radix)];
      index /= radix;
    }
    for (int t = n_terms - 1; t >= 0; --t) {
      long radix = static_cast<long>(term_bs[static_cast<size_t>(t)].size());
      b_idx[static_cast<size_t>(t)] = static_cast<size_t>(index % radix);
      index /= radix;
    }
  }
};

std::vector<std::vector<Rational>> axis_product(const std::vector<GridAxis>& axes) {
  std::vector<std::vector<Rational>> out{{}};
  for (const auto& ax : axes) {
    std::vector<Rational> vals = ax.values();
    std::vector<std::vector<Rational>> next;
    next.reserve(out.size() * vals.size());
    for (const auto& prefix : out) {
      for (const auto& v : vals) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

struct StageCache {
  PrecisionContext ctx;
  Real tol;
  std::unique_ptr<NahmFamily> family;
  std::map<std::vector<Rational>, TermAsymptotics> terms;
  std::map<std::vector<Rational>, bool> single_pass;
  std::optional<Rational> alpha_over_pi2;
};

bool residuals_pass(const std::vector<Real>& L, const Real& tol) {
  for (size_t p = 1; p < L.size(); ++p) {  // L[0] = L_1 is absorbed by C*
    if (!(L[p].abs() < tol)) return false;
  }
  return true;
}

StageCache make_stage(const SearchSpec& spec, int digits) {
  PrecisionContext ctx(digits);
  Real tol = spec.tol ? Real(*spec.tol, ctx) : pow10(-(digits / 3), ctx);
  if (tol.sign() <= 0) throw std::invalid_argument("SearchSpec: tol must be positive");
  StageCache stage{ctx, tol, nullptr, {}, {}, {}};
  stage.family = std::make_unique<NahmFamily>(spec.A, spec.J, spec.P, ctx);
  stage.alpha_over_pi2 = alpha_rationality(stage.family->alpha(), BigInt(1000000),
                                           pow10(-(2 * digits / 3), ctx));
  return stage;
}

void warm_cache(StageCache& stage, const std::vector<Rational>& B, int P) {
  if (stage.terms.count(B)) return;
  TermAsymptotics t = stage.family->term(B, Rational(0));
  ResidualReport solo = modularity_residuals({t}, P);
  stage.single_pass.emplace(B, residuals_pass(solo.L, stage.tol));
  stage.terms.emplace(B, std::move(t));
}

CandidateRecord evaluate_tuple(const SearchSpec& spec, const StageCache& stage,
                               const TupleSpace& space, long index) {
  std::vector<size_t> b_idx;
  std::vector<long> cprime;
  space.decode(index, b_idx, cprime);

  std::vector<TermAsymptotics> terms;
  terms.reserve(static_cast<size_t>(spec.n_terms));
  std::vector<std::vector<Rational>> Bs;
  for (int t = 0; t < spec.n_terms; ++t) {
    const auto& B = space.term_bs[static_cast<size_t>(t)][b_idx[static_cast<size_t>(t)]];
    Bs.push_back(B);
    TermAsymptotics ta = stage.terms.at(B);
    if (cprime[static_cast<size_t>(t)] != 0) {
      ta.gamma = ta.gamma + Real(cprime[static_cast<size_t>(t)], stage.ctx);
    }
    terms.push_back(std::move(ta));
  }

  CandidateRecord rec(stage.ctx);
  rec.family = spec.family;
  rec.B = Bs;
  rec.Cprime = cprime;
  rec.alpha_over_pi2 = stage.alpha_over_pi2;

  ResidualReport rep = modularity_residuals(terms, spec.P);
  rec.L = rep.L;
  rec.Cstar = rep.L[0];
  rec.lambda = rep.lambda;
  rec.passed = residuals_pass(rep.L, stage.tol);

  if (spec.n_terms >= 2) {
    bool identical = true;
    for (int t = 1; t < spec.n_terms && identical; ++t) {
      identical = Bs[static_cast<size_t>(t)] == Bs[0] &&
                  cprime[static_cast<size_t>(t)] == cprime[0];
    }
    bool each_solo = true;
    for (int t = 0; t < spec.n_terms && each_solo; ++t) {
      each_solo = stage.single_pass.at(Bs[static_cast<size_t>(t)]);
    }
    rec.degenerate = identical || each_solo;
  }
  return rec;
}

}  // namespace

std::vector<CandidateRecord> scan(const SearchSpec& spec) {
  spec.validate();

  TupleSpace space;
  space.n_terms = spec.n_terms;
  for (const auto& axes : spec.b_grid) space.term_bs.push_back(axis_product(axes));
  for (long c = spec.cprime_lo; c <= spec.cprime_hi; ++c) space.cprimes.push_back(c);
  long total = space.size();

  // Screening stage: every tuple.
  StageCache screen = make_stage(spec, spec.digits_screen);
  for (const auto& tb : space.term_bs) {
    for (const auto& B : tb) warm_cache(screen, B, spec.P);
  }

  std::vector<std::optional<CandidateRecord>> slots(static_cast<size_t>(total));
  int workers = std::max(1, spec.threads);
  if (workers == 1) {
    for (long i = 0; i < total; ++i) slots[static_cast<size_t>(i)] = evaluate_tuple(spec, screen, space, i);
  } else {
    std::vector<std::thread> pool;
    std::vector<long> cut(static_cast<size_t>(workers) + 1, 0);
    for (int w = 0; w <= workers; ++w) {
      cut[static_cast<size_t>(w)] = total * w / workers;
    }
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (long i = cut[static_cast<size_t>(w)]; i < cut[static_cast<size_t>(w) + 1]; ++i) {
          slots[static_cast<size_t>(i)] = evaluate_tuple(spec, screen, space, i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<CandidateRecord> records;
  records.reserve(static_cast<size_t>(total));
  std::vector<long> hits;
  for (long i = 0; i < total; ++i) {
    records.push_back(std::move(*slots[static_cast<size_t>(i)]));
    if (records.back().passed) hits.push_back(i);
  }

  // Confirmation stage: re-derive every screening hit at the confirmation
  // precision; that verdict is final.
  if (!hits.empty()) {
    StageCache confirm = make_stage(spec, spec.digits_confirm);
    std::vector<size_t> b_idx;
    std::vector<long> cprime;
    for (long i : hits) {
      space.decode(i, b_idx, cprime);
      for (int t = 0; t < spec.n_terms; ++t) {
        warm_cache(confirm, space.term_bs[static_cast<size_t>(t)][b_idx[static_cast<size_t>(t)]],
                   spec.P);
      }
    }
    for (long i : hits) {
      records[static_cast<size_t>(i)] = evaluate_tuple(spec, confirm, space, i);
    }
  }
  return records;
}

std::optional<Rational> alpha_rationality(const Real& alpha, const BigInt& max_den,
                                          const Real& tol) {
  PrecisionContext ctx = alpha.context();
  Real pi = Real::pi(ctx);
  return rational_reconstruct(alpha / (pi * pi), max_den, tol);
}

Real dilog_check(DilogIdentity which, const PrecisionContext& ctx) {
  Real pi = Real::pi(ctx);
  Real third(make_rational(1, 3), ctx);
  if (which == DilogIdentity::cap) {
    Real target = pi * pi / Real(18, ctx);
    Real lhs = rogers_dilog(Real(make_rational(1, 4), ctx)) +
               third * rogers_dilog(Real(make_rational(1, 9), ctx));
    return (lhs - target).abs();
  }
  const FamilySpec& fam = family("mod9");
  std::vector<Real> Q = solve_Q(fam.A, fam.J, ctx);
  Real target = Real(4, ctx) * pi * pi / Real(27, ctx);
  Real lhs = rogers_dilog(Q[0]) + third * rogers_dilog(Q[1].pow(3));
  return (lhs - target).abs();
}

bool IdentityResult::all_matched() const {
  for (const auto& f : forms) {
    if (!f.matched) return false;
  }
  if (enumeration_checked && !enumeration_matched) return false;
  return true;
}

std::vector<IdentityResult> verify_identities(const std::vector<Identity>& identities, long order,
                                              long enum_cap) {
  std::vector<IdentityResult> out;
  for (const auto& id : identities) {
    IdentityResult res;
    res.name = id.name;
    QSeriesTrunc product = pochhammer_inv(id.product, order);
    std::vector<QSeriesTrunc> sums;
    for (const auto& form : id.sum_forms) {
      QSeriesTrunc sum = nahm_expand_sum(form, order);
      FormResult fr;
      fr.first_mismatch = sum.first_mismatch(product, order);
      fr.matched = !fr.first_mismatch.has_value();
      res.forms.push_back(fr);
      sums.push_back(std::move(sum));
    }
    if (id.condition && enum_cap > 0) {
      long cap = std::min(order, enum_cap);
      res.enumeration_checked = true;
      QSeriesTrunc combinatorial = enumerate_condition_partitions(*id.condition, cap);
      res.enumeration_mismatch = combinatorial.first_mismatch(sums.front(), cap);
      res.enumeration_matched = !res.enumeration_mismatch.has_value();
    }
    out.push_back(std::move(res));
  }
  return out;
}

std::vector<PolyResidual> minimal_poly_check(const PrecisionContext& ctx) {
  std::vector<PolyResidual> out;
  Real one(1, ctx);

  {
    const FamilySpec& fam = family("mod9");
    std::vector<Real> Q = solve_Q(fam.A, fam.J, ctx);
    const Real& q1 = Q[0];
    const Real& q2 = Q[1];
    Real q2c = q2.pow(3);
    Real xi1 = q1 / (one - q1);
    Real xi2 = Real(3, ctx) * q2c / (one - q2c);

    out.push_back({"mod9-Q1-cubic", (q1.pow(3) - Real(3, ctx) * q1.pow(2) + one).abs()});
    out.push_back({"mod9-Q2-nonic",
                   (q2.pow(9) - Real(6, ctx) * q2.pow(6) + Real(3, ctx) * q2.pow(3) + one).abs()});
    out.push_back({"mod9-xi1-cubic", (xi1.pow(3) - Real(3, ctx) * xi1 - one).abs()});
    out.push_back({"mod9-xi2-cubic",
                   (xi2.pow(3) - Real(9, ctx) * xi2.pow(2) - Real(54, ctx) * xi2 - Real(27, ctx))
                       .abs()});
    Real s = (Real::pi(ctx) / Real(18, ctx)).sin();
    out.push_back({"mod9-Q1-closed-form", (q1 - (one - Real(2, ctx) * s)).abs()});
    out.push_back(
        {"mod9-Q2-closed-form", (q2c - (Real(4, ctx) * s * s + Real(4, ctx) * s)).abs()});
  }

  {
    const FamilySpec& fam = family("capparelli");
    std::vector<Real> Q = solve_Q(fam.A, fam.J, ctx);
    out.push_back({"cap-Q1-rational", (Q[0] - Real(make_rational(3, 4), ctx)).abs()});
    out.push_back({"cap-Q2-cubed-rational", (Q[1].pow(3) - Real(make_rational(8, 9), ctx)).abs()});
    // Q_2 = 2 / 3^{2/3}
    Real closed = Real(2, ctx) / Real(3, ctx).pow(make_rational(2, 3));
    out.push_back({"cap-Q2-closed-form", (Q[1] - closed).abs()});
  }
  return out;
}

}  // namespace nahm
