#pragma once

#include <iosfwd>
#include <string>

#include "nahm/asymptotics.hpp"
#include "nahm/corpus.hpp"
#include "nahm/search.hpp"

namespace nahm {

/// Series text format: one "n coefficient" pair per line, ascending n from
/// 0 through the truncation order, decimal big integers.
void write_series(std::ostream& os, const QSeriesTrunc& s);
QSeriesTrunc read_series(std::istream& is);

/// Identity text format: whitespace-separated key=value tokens.
///
///   name cap2
///   family capparelli
///   condition cap-2
///   product M=12 num=2,10
///   product M=2 den=1
///   form
///   term B=1,0 C=0
///   term B=4,6 C=1
///   ...
///
/// `term` lines inherit k/A/J from the named family unless they carry
/// explicit A=r,r;r,r J=j,j lower=l,l fields. `form` separates sum forms;
/// a leading implicit form is opened by the first term. Lines starting
/// with '#' are comments.
Identity parse_identity(std::istream& is);
Identity parse_identity_file(const std::string& path);
void write_identity(std::ostream& os, const Identity& id);

std::string profile_record(const AsymptoticProfile& profile);

enum class RecordFormat { text, jsonl, csv };
RecordFormat record_format_from_string(const std::string& name);

/// Candidate records, one line per record. The JSONL fields are exactly:
/// family, terms (array of {B, Cprime}), residuals (L_2..L_P as decimal
/// strings), Cstar, lambda, alpha_over_pi2 ({num,den} or null),
/// degenerate, passed. CSV and text carry the same columns.
void write_records(std::ostream& os, const std::vector<CandidateRecord>& records,
                   RecordFormat format);

}  // namespace nahm
