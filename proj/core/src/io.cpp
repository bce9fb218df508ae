#include "nahm/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace nahm {

void write_series(std::ostream& os, const QSeriesTrunc& s) {
  for (long n = 0; n <= s.top(); ++n) {
    os << n << ' ' << s.coeff(n).get_str() << '\n';
  }
}

QSeriesTrunc read_series(std::istream& is) {
  std::vector<BigInt> coeffs;
  std::string line;
  long expected = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long n;
    std::string value;
    if (!(ls >> n >> value)) throw std::invalid_argument("read_series: malformed line '" + line + "'");
    if (n != expected) throw std::invalid_argument("read_series: exponents must ascend from 0");
    coeffs.emplace_back(value);
    ++expected;
  }
  if (coeffs.empty()) throw std::invalid_argument("read_series: empty input");
  return QSeriesTrunc::from_coeffs(std::move(coeffs));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_rational(tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<long> parse_long_list(const std::string& s) {
  std::vector<long> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stol(tok));
  return out;
}

std::vector<std::pair<int, int>> parse_residues(const std::string& s) {
  // "2,3,9,10" or with multiplicities "2x2,3"
  std::vector<std::pair<int, int>> out;
  for (const auto& tok : split(s, ',')) {
    auto xpos = tok.find('x');
    if (xpos == std::string::npos) {
      out.emplace_back(std::stoi(tok), 1);
    } else {
      out.emplace_back(std::stoi(tok.substr(0, xpos)), std::stoi(tok.substr(xpos + 1)));
    }
  }
  return out;
}

std::map<std::string, std::string> keyvals(std::istringstream& ls) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (ls >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("identity file: expected key=value, got '" + tok + "'");
    }
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

std::string join_residues(const std::vector<std::pair<int, int>>& rs) {
  std::ostringstream os;
  bool first = true;
  for (auto [r, m] : rs) {
    if (!first) os << ',';
    first = false;
    os << r;
    if (m != 1) os << 'x' << m;
  }
  return os.str();
}

}  // namespace

Identity parse_identity(std::istream& is) {
  Identity id;
  std::string line;
  bool have_family = false;
  FamilySpec fam;
  int products_seen = 0;
  bool form_open = false;

  auto ensure_form = [&]() {
    if (!form_open) {
      id.sum_forms.emplace_back();
      form_open = true;
    }
  };

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "name") {
      ls >> id.name;
    } else if (head == "family") {
      ls >> id.family;
      fam = family(id.family);
      have_family = true;
    } else if (head == "condition") {
      std::string cond;
      ls >> cond;
      id.condition = condition_from_string(cond);
    } else if (head == "product") {
      auto kv = keyvals(ls);
      PochFamily pf;
      if (!kv.count("M")) throw std::invalid_argument("identity file: product needs M=");
      pf.modulus = std::stoi(kv.at("M"));
      if (kv.count("num")) pf.numer = parse_residues(kv.at("num"));
      if (kv.count("den")) pf.denom = parse_residues(kv.at("den"));
      if (products_seen == 0) {
        id.product.main = pf;
      } else if (products_seen == 1) {
        id.product.extra = pf;
      } else {
        throw std::invalid_argument("identity file: at most two product families");
      }
      ++products_seen;
    } else if (head == "form") {
      id.sum_forms.emplace_back();
      form_open = true;
    } else if (head == "term") {
      ensure_form();
      auto kv = keyvals(ls);
      NahmDatum d;
      if (kv.count("A")) {
        for (const auto& row : split(kv.at("A"), ';')) d.A.push_back(parse_rational_list(row));
        d.k = static_cast<int>(d.A.size());
        if (!kv.count("J")) throw std::invalid_argument("identity file: explicit A needs J=");
        d.J = parse_int_list(kv.at("J"));
      } else {
        if (!have_family) throw std::invalid_argument("identity file: term before family");
        d.A = fam.A;
        d.J = fam.J;
        d.k = static_cast<int>(fam.A.size());
      }
      if (!kv.count("B")) throw std::invalid_argument("identity file: term needs B=");
      d.B = parse_rational_list(kv.at("B"));
      d.C = kv.count("C") ? parse_rational(kv.at("C")) : Rational(0);
      d.lower = kv.count("lower") ? parse_long_list(kv.at("lower"))
                                  : std::vector<long>(static_cast<size_t>(d.k), 0);
      d.validate();
      id.sum_forms.back().push_back(std::move(d));
    } else {
      throw std::invalid_argument("identity file: unknown directive '" + head + "'");
    }
  }
  if (id.name.empty()) throw std::invalid_argument("identity file: missing name");
  if (id.sum_forms.empty() || id.sum_forms.front().empty()) {
    throw std::invalid_argument("identity file: no sum terms");
  }
  if (products_seen == 0) throw std::invalid_argument("identity file: missing product");
  return id;
}

Identity parse_identity_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open identity file '" + path + "'");
  return parse_identity(is);
}

void write_identity(std::ostream& os, const Identity& id) {
  os << "name " << id.name << '\n';
  if (!id.family.empty()) os << "family " << id.family << '\n';
  if (id.condition) os << "condition " << condition_to_string(*id.condition) << '\n';
  auto emit_product = [&](const PochFamily& pf) {
    os << "product M=" << pf.modulus;
    if (!pf.numer.empty()) os << " num=" << join_residues(pf.numer);
    if (!pf.denom.empty()) os << " den=" << join_residues(pf.denom);
    os << '\n';
  };
  emit_product(id.product.main);
  if (id.product.extra) emit_product(*id.product.extra);
  const FamilySpec* fam = id.family.empty() ? nullptr : &family(id.family);
  for (const auto& form : id.sum_forms) {
    os << "form\n";
    for (const auto& d : form) {
      os << "term";
      bool family_datum = fam != nullptr && d.A == fam->A && d.J == fam->J;
      if (!family_datum) {
        os << " A=";
        for (size_t i = 0; i < d.A.size(); ++i) {
          if (i) os << ';';
          for (size_t j = 0; j < d.A[i].size(); ++j) {
            if (j) os << ',';
            os << rational_to_string(d.A[i][j]);
          }
        }
        os << " J=";
        for (size_t i = 0; i < d.J.size(); ++i) {
          if (i) os << ',';
          os << d.J[i];
        }
      }
      os << " B=";
      for (size_t i = 0; i < d.B.size(); ++i) {
        if (i) os << ',';
        os << rational_to_string(d.B[i]);
      }
      os << " C=" << rational_to_string(d.C);
      bool trivial_lower = true;
      for (long lo : d.lower) trivial_lower = trivial_lower && lo == 0;
      if (!trivial_lower) {
        os << " lower=";
        for (size_t i = 0; i < d.lower.size(); ++i) {
          if (i) os << ',';
          os << d.lower[i];
        }
      }
      os << '\n';
    }
  }
}

std::string profile_record(const AsymptoticProfile& profile) {
  std::ostringstream os;
  auto vec = [&](const char* name, const std::vector<Real>& v) {
    os << name;
    for (const auto& x : v) os << ' ' << x.to_string();
    os << '\n';
  };
  vec("Q", profile.Q);
  vec("xi", profile.xi);
  os << "alpha " << profile.alpha.to_string() << '\n';
  os << "beta " << profile.beta.to_string() << '\n';
  os << "gamma " << profile.gamma.to_string() << '\n';
  vec("c", profile.c);
  os << "detAtilde " << profile.detAtilde.to_string() << '\n';
  return os.str();
}

RecordFormat record_format_from_string(const std::string& name) {
  if (name == "text") return RecordFormat::text;
  if (name == "jsonl") return RecordFormat::jsonl;
  if (name == "csv") return RecordFormat::csv;
  throw std::invalid_argument("unknown record format '" + name + "'");
}

namespace {

std::string rational_vec_text(const std::vector<Rational>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << rational_to_string(v[i]);
  }
  return os.str();
}

std::string terms_text(const CandidateRecord& rec) {
  std::ostringstream os;
  for (size_t t = 0; t < rec.B.size(); ++t) {
    if (t) os << "; ";
    os << "B=" << rational_vec_text(rec.B[t]) << " C=" << rec.Cprime[t];
  }
  return os.str();
}

std::string residuals_text(const CandidateRecord& rec, char sep, int digits = 0) {
  std::ostringstream os;
  for (size_t p = 1; p < rec.L.size(); ++p) {
    if (p > 1) os << sep;
    os << rec.L[p].to_string(digits);
  }
  return os.str();
}

std::string alpha_text(const CandidateRecord& rec) {
  return rec.alpha_over_pi2 ? rational_to_string(*rec.alpha_over_pi2) : std::string();
}

}  // namespace

void write_records(std::ostream& os, const std::vector<CandidateRecord>& records,
                   RecordFormat format) {
  if (format == RecordFormat::csv) {
    os << "family,terms,residuals,Cstar,lambda,alpha_over_pi2,degenerate,passed\n";
  }
  for (const auto& rec : records) {
    switch (format) {
      case RecordFormat::jsonl: {
        nlohmann::ordered_json j;
        j["family"] = rec.family;
        j["terms"] = nlohmann::ordered_json::array();
        for (size_t t = 0; t < rec.B.size(); ++t) {
          nlohmann::ordered_json term;
          term["B"] = nlohmann::ordered_json::array();
          for (const auto& b : rec.B[t]) term["B"].push_back(rational_to_string(b));
          term["Cprime"] = rec.Cprime[t];
          j["terms"].push_back(std::move(term));
        }
        j["residuals"] = nlohmann::ordered_json::array();
        for (size_t p = 1; p < rec.L.size(); ++p) j["residuals"].push_back(rec.L[p].to_string());
        j["Cstar"] = rec.Cstar.to_string();
        j["lambda"] = rec.lambda.to_string();
        if (rec.alpha_over_pi2) {
          j["alpha_over_pi2"] = {{"num", rec.alpha_over_pi2->get_num().get_str()},
                                 {"den", rec.alpha_over_pi2->get_den().get_str()}};
        } else {
          j["alpha_over_pi2"] = nullptr;
        }
        j["degenerate"] = rec.degenerate;
        j["passed"] = rec.passed;
        os << j.dump() << '\n';
        break;
      }
      case RecordFormat::csv: {
        os << rec.family << ",\"" << terms_text(rec) << "\",\"" << residuals_text(rec, ' ')
           << "\"," << rec.Cstar.to_string() << ',' << rec.lambda.to_string() << ','
           << alpha_text(rec) << ',' << (rec.degenerate ? "true" : "false") << ','
           << (rec.passed ? "true" : "false") << '\n';
        break;
      }
      case RecordFormat::text: {
        os << (rec.passed ? "PASS " : "fail ") << rec.family << "  " << terms_text(rec)
           << "  Cstar=" << rec.Cstar.to_string(12) << "  residuals=["
           << residuals_text(rec, ' ', 6) << "]";
        if (rec.degenerate) os << "  degenerate";
        if (rec.alpha_over_pi2) os << "  alpha/pi^2=" << alpha_text(rec);
        os << '\n';
        break;
      }
    }
  }
}

}  // namespace nahm
