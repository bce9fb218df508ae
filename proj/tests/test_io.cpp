#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nahm/asymptotics.hpp"
#include "nahm/corpus.hpp"
#include "nahm/io.hpp"
#include "nahm/search.hpp"

using namespace nahm;

namespace {

bool same_identity(const Identity& a, const Identity& b) {
  if (a.name != b.name || a.family != b.family) return false;
  if (a.condition != b.condition) return false;
  if (a.sum_forms.size() != b.sum_forms.size()) return false;
  for (size_t f = 0; f < a.sum_forms.size(); ++f) {
    if (a.sum_forms[f].size() != b.sum_forms[f].size()) return false;
    for (size_t t = 0; t < a.sum_forms[f].size(); ++t) {
      const NahmDatum& x = a.sum_forms[f][t];
      const NahmDatum& y = b.sum_forms[f][t];
      if (x.A != y.A || x.B != y.B || x.C != y.C || x.J != y.J || x.lower != y.lower) return false;
    }
  }
  auto same_family = [](const PochFamily& x, const PochFamily& y) {
    return x.modulus == y.modulus && x.numer == y.numer && x.denom == y.denom;
  };
  if (!same_family(a.product.main, b.product.main)) return false;
  if (a.product.extra.has_value() != b.product.extra.has_value()) return false;
  if (a.product.extra && !same_family(*a.product.extra, *b.product.extra)) return false;
  return true;
}

}  // namespace

TEST_CASE("identity text format round trips the corpus") {
  for (const auto& id : corpus()) {
    std::stringstream ss;
    write_identity(ss, id);
    Identity back = parse_identity(ss);
    INFO("identity ", id.name);
    CHECK(same_identity(id, back));
  }
}

TEST_CASE("shipped identity files match the built-in corpus") {
  for (const auto& id : corpus()) {
    std::string path = std::string(NAHMSCAN_DATA_DIR) + "/identities/" + id.name + ".nahm";
    INFO("file ", path);
    Identity fromfile = parse_identity_file(path);
    CHECK(same_identity(id, fromfile));
  }
}

TEST_CASE("identity parser rejects malformed input") {
  std::stringstream no_product("name x\nfamily mod9\nterm B=0,0 C=0\n");
  CHECK_THROWS_AS(parse_identity(no_product), std::invalid_argument);

  std::stringstream no_name("family mod9\nproduct M=9 den=1\nterm B=0,0 C=0\n");
  CHECK_THROWS_AS(parse_identity(no_name), std::invalid_argument);

  std::stringstream unknown("name x\nfrobnicate y\n");
  CHECK_THROWS_AS(parse_identity(unknown), std::invalid_argument);

  std::stringstream orphan_term("name x\nproduct M=9 den=1\nterm B=0,0 C=0\n");
  CHECK_THROWS_AS(parse_identity(orphan_term), std::invalid_argument);
}

TEST_CASE("jsonl records carry the exact schema") {
  SearchSpec spec = SearchSpec::for_family("capparelli", 2, Rational(0), Rational(1));
  spec.cprime_lo = 0;
  spec.cprime_hi = 1;
  spec.digits_screen = 40;
  spec.digits_confirm = 60;
  auto records = scan(spec);
  std::ostringstream os;
  write_records(os, records, RecordFormat::jsonl);

  std::istringstream is(os.str());
  std::string line;
  size_t count = 0;
  while (std::getline(is, line)) {
    auto j = nlohmann::json::parse(line);
    for (const char* key : {"family", "terms", "residuals", "Cstar", "lambda", "alpha_over_pi2",
                            "degenerate", "passed"}) {
      INFO("missing key ", key);
      CHECK(j.contains(key));
    }
    CHECK(j["family"] == "capparelli");
    CHECK(j["terms"].is_array());
    CHECK(j["terms"].size() == 2);
    CHECK(j["terms"][0].contains("B"));
    CHECK(j["terms"][0].contains("Cprime"));
    CHECK(j["residuals"].size() == 3);  // L_2..L_4
    CHECK(j["degenerate"].is_boolean());
    CHECK(j["passed"].is_boolean());
    if (!j["alpha_over_pi2"].is_null()) {
      CHECK(j["alpha_over_pi2"].contains("num"));
      CHECK(j["alpha_over_pi2"].contains("den"));
      CHECK(j["alpha_over_pi2"]["num"] == "1");
      CHECK(j["alpha_over_pi2"]["den"] == "18");
    }
    ++count;
  }
  CHECK(count == records.size());

  // csv carries the same columns
  std::ostringstream cs;
  write_records(cs, records, RecordFormat::csv);
  std::istringstream cis(cs.str());
  std::string header;
  std::getline(cis, header);
  CHECK(header == "family,terms,residuals,Cstar,lambda,alpha_over_pi2,degenerate,passed");
}

TEST_CASE("profile record layout") {
  PrecisionContext ctx(60);
  const FamilySpec& fam = family("capparelli");
  NahmDatum d = NahmDatum::make(fam.A, {Rational(0), Rational(0)}, Rational(0), fam.J);
  AsymptoticProfile prof = build_profile(d, 4, ctx);
  std::string record = profile_record(prof);
  for (const char* field : {"Q ", "xi ", "alpha ", "beta ", "gamma ", "c ", "detAtilde "}) {
    INFO("missing field ", field);
    CHECK(record.find(field) != std::string::npos);
  }
  // the xi line carries both coordinates at full precision
  std::istringstream is(record);
  std::string line;
  bool seen_xi = false;
  while (std::getline(is, line)) {
    if (line.rfind("xi ", 0) == 0) {
      seen_xi = true;
      std::istringstream ls(line);
      std::string tag, x1, x2;
      ls >> tag >> x1 >> x2;
      CHECK(Real(x1, ctx).cmp(3) == 0);
      CHECK((Real(x2, ctx) - Real(24, ctx)).abs() < pow10(-50, ctx));
    }
  }
  CHECK(seen_xi);
}
