#include "nahm/corpus.hpp"

#include <stdexcept>

namespace nahm {

namespace {

std::vector<std::vector<Rational>> matrix2(long a, long b, long c, long d) {
  return {{Rational(a), Rational(b)}, {Rational(c), Rational(d)}};
}

NahmDatum term2(const FamilySpec& fam, long b1, long b2, long c, std::vector<long> lower = {0, 0}) {
  return NahmDatum::make(fam.A, {Rational(b1), Rational(b2)}, Rational(c), fam.J,
                         std::move(lower));
}

ProductSpec denominators(int modulus, std::vector<int> residues) {
  ProductSpec spec;
  spec.main.modulus = modulus;
  for (int r : residues) spec.main.denom.emplace_back(r, 1);
  return spec;
}

std::vector<Identity> build_corpus() {
  const FamilySpec& cap = family("capparelli");
  const FamilySpec& mod9 = family("mod9");

  std::vector<Identity> out;

  // Capparelli, first identity: single-sum form.
  out.push_back(Identity{
      "cap1", "capparelli", {{term2(cap, 0, 0, 0)}},
      denominators(12, {2, 3, 9, 10}), ConditionKind::cap1});

  // Same product through the two-sum form.
  out.push_back(Identity{
      "cap1alt", "capparelli", {{term2(cap, 1, 0, 0), term2(cap, 4, 6, 2)}},
      denominators(12, {2, 3, 9, 10}), ConditionKind::cap1});

  // Capparelli, second identity: both known two-sum forms against
  // (q^2,q^10;q^12)_inf / (q;q^2)_inf.
  {
    ProductSpec prod;
    prod.main.modulus = 12;
    prod.main.numer = {{2, 1}, {10, 1}};
    PochFamily odd;
    odd.modulus = 2;
    odd.denom = {{1, 1}};
    prod.extra = odd;
    out.push_back(Identity{
        "cap2", "capparelli",
        {{term2(cap, 1, 0, 0), term2(cap, 4, 6, 1)},
         {term2(cap, 1, 3, 0), term2(cap, 3, 6, 1)}},
        prod, ConditionKind::cap2});
  }

  out.push_back(Identity{"kr-1", "mod9", {{term2(mod9, 0, 0, 0)}},
                         denominators(9, {1, 3, 6, 8}), ConditionKind::kr1});
  out.push_back(Identity{"kr-2", "mod9", {{term2(mod9, 1, 3, 0)}},
                         denominators(9, {2, 3, 6, 7}), ConditionKind::kr2});
  out.push_back(Identity{"kr-3", "mod9", {{term2(mod9, 2, 3, 0)}},
                         denominators(9, {3, 4, 5, 6}), ConditionKind::kr3});
  out.push_back(Identity{"kr-4", "mod9", {{term2(mod9, 1, 2, 0)}},
                         denominators(9, {2, 3, 5, 8}), ConditionKind::kr4});

  // Fifth companion: two restricted-support sums (n_2 >= 1) plus the
  // single-variable Rogers-Ramanujan-type piece sum q^{n^2}/(q;q)_n.
  {
    NahmDatum single = NahmDatum::make({{Rational(2)}}, {Rational(0)}, Rational(0), {1}, {0});
    out.push_back(Identity{
        "kr-5", "mod9",
        {{term2(mod9, 1, 4, 0, {0, 1}), term2(mod9, 2, 4, 1, {0, 1}), single}},
        denominators(9, {1, 4, 6, 7}), ConditionKind::kr5});
  }

  return out;
}

}  // namespace

const std::vector<FamilySpec>& families() {
  static const std::vector<FamilySpec> fams = {
      {"capparelli", matrix2(4, 6, 6, 12), {1, 3}},
      {"mod9", matrix2(2, 3, 3, 6), {1, 3}},
  };
  return fams;
}

const FamilySpec& family(const std::string& name) {
  for (const auto& f : families()) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

const std::vector<Identity>& corpus() {
  static const std::vector<Identity> identities = build_corpus();
  return identities;
}

const Identity* find_identity(const std::string& name) {
  for (const auto& id : corpus()) {
    if (id.name == name) return &id;
  }
  return nullptr;
}

}  // namespace nahm
