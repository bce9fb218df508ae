#pragma once

#include <string>

#include "nahm/qseries.hpp"

namespace nahm {

/// Difference-condition families with combinatorial enumerators.
///
/// cap1/cap2: adjacent parts differ by at least 2, and by at least 4 unless
/// they add up to a multiple of 6; cap1 forbids part 1, cap2 forbids part 2.
///
/// kr1..kr5: weakly increasing parts with lambda_{j+2} - lambda_j >= 3 and,
/// whenever adjacent parts differ by at most 1, their sum is fixed mod 3.
/// kr1: sum == 0 (mod 3); kr2: same with smallest part >= 2; kr3: smallest
/// part >= 3; kr4: sum == 2 (mod 3), smallest part >= 2; kr5: sum == 1
/// (mod 3) with no 2+2 sub-partition.
enum class ConditionKind { cap1, cap2, kr1, kr2, kr3, kr4, kr5 };

ConditionKind condition_from_string(const std::string& id);  // "cap-1", "kr-3", ...
std::string condition_to_string(ConditionKind kind);

/// Generating series of the partition counts for one condition family,
/// computed by exhaustive dynamic programming over (previous part, last
/// part) states. Intended as an independent combinatorial oracle; n_max is
/// capped at 80.
QSeriesTrunc enumerate_condition_partitions(ConditionKind kind, long n_max);

}  // namespace nahm
