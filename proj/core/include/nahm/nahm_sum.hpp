#pragma once

#include "nahm/nahm_datum.hpp"
#include "nahm/qseries.hpp"

namespace nahm {

/// Exact q-expansion of a Nahm-type sum to the given order.
///
/// Positive definiteness makes the admissible lattice finite; every term
/// exponent must be a nonnegative integer (the series context rejects
/// fractional C), and any admissible negative exponent is an error.
QSeriesTrunc nahm_expand(const NahmDatum& d, long order);

/// Termwise sum of several Nahm data expanded to a common order.
QSeriesTrunc nahm_expand_sum(const std::vector<NahmDatum>& terms, long order);

}  // namespace nahm
