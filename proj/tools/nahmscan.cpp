// nahmscan: verify Rogers-Ramanujan-type identities, compute Nahm-sum
// asymptotic profiles, and search exponent-perturbation grids for q-series
// passing the necessary modularity constraints.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "nahm/asymptotics.hpp"
#include "nahm/corpus.hpp"
#include "nahm/io.hpp"
#include "nahm/nahm_sum.hpp"
#include "nahm/search.hpp"
#include "nahm/special.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream& stream() { return file ? *file : std::cout; }

  static OutputTarget open(const std::string& path) {
    OutputTarget t;
    if (!path.empty()) {
      t.file = std::make_unique<std::ofstream>(path);
      if (!*t.file) throw std::runtime_error("cannot open output file '" + path + "'");
    }
    return t;
  }
};

std::vector<nahm::Rational> parse_b(const std::vector<std::string>& raw, size_t k) {
  if (raw.size() != k) {
    throw CLI::ValidationError("--B", "expected " + std::to_string(k) + " coordinates");
  }
  std::vector<nahm::Rational> B;
  for (const auto& s : raw) B.push_back(nahm::parse_rational(s));
  return B;
}

int run_verify(const std::string& identity, bool all, const std::string& datum_file, long order,
               long enum_cap, const std::string& output) {
  std::vector<nahm::Identity> targets;
  if (all) {
    targets = nahm::corpus();
  } else if (!datum_file.empty()) {
    targets.push_back(nahm::parse_identity_file(datum_file));
  } else {
    const nahm::Identity* id = nahm::find_identity(identity);
    if (id == nullptr) {
      std::cerr << "unknown identity '" << identity << "'\n";
      return kExitUsage;
    }
    targets.push_back(*id);
  }
  OutputTarget out = OutputTarget::open(output);
  auto results = nahm::verify_identities(targets, order, enum_cap);
  bool ok = true;
  for (const auto& r : results) {
    out.stream() << r.name << ":";
    for (size_t f = 0; f < r.forms.size(); ++f) {
      if (r.forms[f].matched) {
        out.stream() << " form" << f + 1 << "=match";
      } else {
        out.stream() << " form" << f + 1 << "=MISMATCH@q^" << *r.forms[f].first_mismatch;
        ok = false;
      }
    }
    if (r.enumeration_checked) {
      if (r.enumeration_matched) {
        out.stream() << " enumeration=match";
      } else {
        out.stream() << " enumeration=MISMATCH@q^" << *r.enumeration_mismatch;
        ok = false;
      }
    }
    out.stream() << " (order " << order << ")\n";
  }
  return ok ? kExitOk : kExitComputation;
}

int run_profile(const std::string& family_name, const std::string& datum_file,
                const std::vector<std::string>& b_raw, const std::string& c_raw, int P, int digits,
                const std::string& tol_raw, const std::string& output) {
  nahm::PrecisionContext ctx(digits);
  nahm::NahmDatum d;
  if (!datum_file.empty()) {
    nahm::Identity id = nahm::parse_identity_file(datum_file);
    d = id.sum_forms.front().front();
    if (!b_raw.empty()) d.B = parse_b(b_raw, d.B.size());
  } else {
    const nahm::FamilySpec& fam = nahm::family(family_name);
    d.k = static_cast<int>(fam.J.size());
    d.A = fam.A;
    d.J = fam.J;
    d.lower.assign(fam.J.size(), 0);
    d.B = parse_b(b_raw, fam.J.size());
  }
  d.C = c_raw.empty() ? nahm::Rational(0) : nahm::parse_rational(c_raw);

  OutputTarget out = OutputTarget::open(output);
  nahm::AsymptoticProfile prof = nahm::build_profile(d, P, ctx);
  nahm::Real tol = tol_raw.empty() ? nahm::pow10(-(digits / 3), ctx) : nahm::Real(tol_raw, ctx);

  nahm::ResidualReport rep =
      nahm::modularity_residuals({nahm::TermAsymptotics{prof.beta, prof.gamma, prof.c}}, P);
  bool passed = true;
  for (size_t p = 1; p < rep.L.size(); ++p) passed = passed && rep.L[p].abs() < tol;

  out.stream() << nahm::profile_record(prof);
  out.stream() << "C " << nahm::solve_C(d, ctx).to_string() << '\n';
  out.stream() << "Cstar " << rep.L[0].to_string() << '\n';
  for (size_t p = 1; p < rep.L.size(); ++p) {
    out.stream() << "L" << p + 1 << " " << rep.L[p].to_string() << '\n';
  }
  auto frac = nahm::alpha_rationality(prof.alpha, nahm::BigInt(1000000),
                                      nahm::pow10(-(2 * digits / 3), ctx));
  out.stream() << "alpha_over_pi2 " << (frac ? nahm::rational_to_string(*frac) : "none") << '\n';
  out.stream() << "passed " << (passed ? "true" : "false") << '\n';
  return kExitOk;
}

int run_scan(const std::string& family_name, int terms, std::vector<std::string> range,
             const std::string& step, std::vector<long> cprime_range, int P, int screen_digits,
             int confirm_digits, const std::string& tol, int threads, bool hits_only,
             const std::string& format, const std::string& output) {
  nahm::SearchSpec spec = nahm::SearchSpec::for_family(
      family_name, terms, nahm::parse_rational(range.at(0)), nahm::parse_rational(range.at(1)),
      nahm::parse_rational(step));
  spec.cprime_lo = cprime_range.at(0);
  spec.cprime_hi = cprime_range.at(1);
  spec.P = P;
  spec.digits_screen = screen_digits;
  spec.digits_confirm = confirm_digits;
  if (!tol.empty()) spec.tol = tol;
  spec.threads = threads;

  auto records = nahm::scan(spec);
  if (hits_only) {
    std::erase_if(records, [](const nahm::CandidateRecord& r) { return !r.passed; });
  }
  OutputTarget out = OutputTarget::open(output);
  nahm::write_records(out.stream(), records, nahm::record_format_from_string(format));
  return kExitOk;
}

int run_factor(const std::string& identity, const std::string& series_file, long order,
               long max_period, const std::string& output) {
  nahm::QSeriesTrunc series(0);
  if (!series_file.empty()) {
    std::ifstream is(series_file);
    if (!is) throw std::runtime_error("cannot open series file '" + series_file + "'");
    series = nahm::read_series(is);
    if (series.top() > order) series = series.truncated(order);
  } else {
    const nahm::Identity* id = nahm::find_identity(identity);
    if (id == nullptr) {
      std::cerr << "unknown identity '" << identity << "'\n";
      return kExitUsage;
    }
    series = nahm::nahm_expand_sum(id->sum_forms.front(), order);
  }
  auto exponents = nahm::euler_factorize(series);
  if (max_period <= 0) max_period = series.order() / 3;
  auto period = nahm::detect_period(exponents, static_cast<int>(max_period));

  OutputTarget out = OutputTarget::open(output);
  for (long n = 1; n < static_cast<long>(exponents.size()); ++n) {
    out.stream() << n << ' ' << exponents[static_cast<size_t>(n)].get_str() << '\n';
  }
  if (period) {
    out.stream() << "period " << *period << '\n';
    out.stream() << "support";
    for (int n = 1; n <= *period; ++n) {
      if (exponents[static_cast<size_t>(n)] != 0) {
        out.stream() << ' ' << n;
        if (exponents[static_cast<size_t>(n)] != 1) {
          out.stream() << '^' << exponents[static_cast<size_t>(n)].get_str();
        }
      }
    }
    out.stream() << '\n';
  } else {
    out.stream() << "period none\n";
  }
  return kExitOk;
}

int run_dilog(const std::string& check, int digits) {
  nahm::PrecisionContext ctx(digits);
  nahm::DilogIdentity which =
      check == "cap" ? nahm::DilogIdentity::cap : nahm::DilogIdentity::mod9;
  nahm::Real residual = nahm::dilog_check(which, ctx);
  std::cout << "residual " << residual.to_string(6) << '\n';
  bool ok = residual < nahm::pow10(-(digits - 10), ctx);
  std::cout << "passed " << (ok ? "true" : "false") << '\n';
  return ok ? kExitOk : kExitComputation;
}

int run_corpus(const std::string& export_dir) {
  if (export_dir.empty()) {
    for (const auto& id : nahm::corpus()) {
      std::cout << id.name << " family=" << id.family << " forms=" << id.sum_forms.size()
                << (id.condition ? " condition=" + nahm::condition_to_string(*id.condition) : "")
                << '\n';
    }
    return kExitOk;
  }
  std::filesystem::create_directories(export_dir);
  for (const auto& id : nahm::corpus()) {
    std::ofstream os(export_dir + "/" + id.name + ".nahm");
    nahm::write_identity(os, id);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-series identity verification and Nahm-sum modularity search"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value config file");

  // verify
  auto* verify = app.add_subcommand("verify", "check sum sides against product sides");
  std::string v_identity, v_datum, v_output;
  bool v_all = false;
  long v_order = 300, v_enum_cap = 60;
  verify->add_option("--identity", v_identity, "corpus identity name (see `corpus`)");
  verify->add_flag("--all", v_all, "verify the whole corpus");
  verify->add_option("--datum-file", v_datum, "identity description file");
  verify->add_option("--order", v_order, "truncation order")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--enum-cap", v_enum_cap, "combinatorial cross-check cap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--output", v_output, "write the report to a file");

  // profile
  auto* profile = app.add_subcommand("profile", "asymptotic constants of one Nahm sum");
  std::string p_family = "capparelli", p_datum, p_c, p_tol, p_output;
  std::vector<std::string> p_b;
  int p_P = 4, p_digits = 120;
  profile->add_option("--family", p_family, "built-in family (capparelli, mod9)");
  profile->add_option("--datum-file", p_datum, "identity description file (first term)");
  profile->add_option("--B", p_b, "exponent perturbation, one rational per coordinate");
  profile->add_option("--C", p_c, "additive constant (default 0)");
  profile->add_option("--P", p_P, "expansion order")->check(CLI::Range(1, 6))->capture_default_str();
  profile->add_option("--digits", p_digits, "working precision (decimal digits)")
      ->check(CLI::Range(30, 100000))
      ->envname("NAHMSCAN_DIGITS")
      ->capture_default_str();
  profile->add_option("--tol", p_tol, "pass threshold (default 1e-(digits/3))");
  profile->add_option("--output", p_output, "write the profile to a file");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "grid search for modularity candidates");
  std::string s_family = "capparelli", s_step = "1", s_tol, s_format = "text", s_output;
  int s_terms = 1, s_P = 4, s_screen = 60, s_confirm = 120, s_threads = 1;
  bool s_hits_only = false;
  std::vector<std::string> s_range = {"0", "6"};
  std::vector<long> s_cprime = {0, 6};
  scan_cmd->add_option("--family", s_family, "built-in family (capparelli, mod9)");
  scan_cmd->add_option("--terms", s_terms, "summands per candidate")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  scan_cmd->add_option("--range", s_range, "B grid bounds (lo hi), rationals")->expected(2);
  scan_cmd->add_option("--step", s_step, "B grid step (rational >= 1/4)")->capture_default_str();
  scan_cmd->add_option("--cprime-range", s_cprime, "C' bounds for terms beyond the first")
      ->expected(2);
  scan_cmd->add_option("--P", s_P, "expansion order")->check(CLI::Range(1, 6))->capture_default_str();
  scan_cmd->add_option("--screen-digits", s_screen, "screening precision")
      ->check(CLI::Range(30, 100000))
      ->capture_default_str();
  scan_cmd->add_option("--confirm-digits", s_confirm, "confirmation precision")
      ->check(CLI::Range(30, 100000))
      ->envname("NAHMSCAN_DIGITS")
      ->capture_default_str();
  scan_cmd->add_option("--tol", s_tol, "pass threshold (default 1e-(digits/3) per stage)");
  scan_cmd->add_option("--threads", s_threads, "worker count (output is order-independent)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scan_cmd->add_flag("--hits-only", s_hits_only, "emit only passing records");
  scan_cmd->add_option("--format", s_format, "text | jsonl | csv")->capture_default_str();
  scan_cmd->add_option("--output", s_output, "write records to a file");

  // factor
  auto* factor = app.add_subcommand("factor", "Euler-factorize a series into (1-q^n)^{-e_n}");
  std::string f_identity, f_series, f_output;
  long f_order = 60, f_max_period = 0;
  factor->add_option("--identity", f_identity, "factor this corpus identity's sum side");
  factor->add_option("--series-file", f_series, "factor a series from an 'n coeff' file");
  factor->add_option("--order", f_order, "truncation order")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  factor->add_option("--max-period", f_max_period, "largest period to try (default order/3)");
  factor->add_option("--output", f_output, "write the report to a file");

  // dilog
  auto* dilog = app.add_subcommand("dilog", "check the family dilogarithm identity");
  std::string d_check = "cap";
  int d_digits = 120;
  dilog->add_option("--check", d_check, "cap | mod9")
      ->check(CLI::IsMember({"cap", "mod9"}))
      ->capture_default_str();
  dilog->add_option("--digits", d_digits, "working precision (decimal digits)")
      ->check(CLI::Range(30, 100000))
      ->envname("NAHMSCAN_DIGITS")
      ->capture_default_str();

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "list or export the built-in identities");
  std::string c_export;
  corpus_cmd->add_option("--export", c_export, "write identity files into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (!v_all && v_identity.empty() && v_datum.empty()) {
        std::cerr << "verify: need --identity, --all or --datum-file\n";
        return kExitUsage;
      }
      return run_verify(v_identity, v_all, v_datum, v_order, v_enum_cap, v_output);
    }
    if (profile->parsed()) {
      return run_profile(p_family, p_datum, p_b, p_c, p_P, p_digits, p_tol, p_output);
    }
    if (scan_cmd->parsed()) {
      return run_scan(s_family, s_terms, s_range, s_step, s_cprime, s_P, s_screen, s_confirm,
                      s_tol, s_threads, s_hits_only, s_format, s_output);
    }
    if (factor->parsed()) {
      if (f_identity.empty() && f_series.empty()) {
        std::cerr << "factor: need --identity or --series-file\n";
        return kExitUsage;
      }
      return run_factor(f_identity, f_series, f_order, f_max_period, f_output);
    }
    if (dilog->parsed()) return run_dilog(d_check, d_digits);
    if (corpus_cmd->parsed()) return run_corpus(c_export);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}
