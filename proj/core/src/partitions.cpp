#include "nahm/partitions.hpp"

#include <cstdint>
#include <stdexcept>

namespace nahm {

ConditionKind condition_from_string(const std::string& id) {
  if (id == "cap-1") return ConditionKind::cap1;
  if (id == "cap-2") return ConditionKind::cap2;
  if (id == "kr-1") return ConditionKind::kr1;
  if (id == "kr-2") return ConditionKind::kr2;
  if (id == "kr-3") return ConditionKind::kr3;
  if (id == "kr-4") return ConditionKind::kr4;
  if (id == "kr-5") return ConditionKind::kr5;
  throw std::invalid_argument("unknown condition kind '" + id + "'");
}

std::string condition_to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::cap1: return "cap-1";
    case ConditionKind::cap2: return "cap-2";
    case ConditionKind::kr1: return "kr-1";
    case ConditionKind::kr2: return "kr-2";
    case ConditionKind::kr3: return "kr-3";
    case ConditionKind::kr4: return "kr-4";
    case ConditionKind::kr5: return "kr-5";
  }
  throw std::logic_error("condition_to_string: bad kind");
}

namespace {

constexpr std::int64_t kUnset = -1;

// Capparelli-style rules only couple adjacent parts, so (last part) is a
// sufficient state. Parts are produced in weakly increasing order; the
// difference condition forces strict growth here.
struct CapCounter {
  long n_max;
  int forbidden_part;
  std::vector<std::vector<std::int64_t>> memo;  // [budget][last] with last==0 for "none"

  CapCounter(long n_max_, int forbidden)
      : n_max(n_max_), forbidden_part(forbidden),
        memo(static_cast<size_t>(n_max_) + 1,
             std::vector<std::int64_t>(static_cast<size_t>(n_max_) + 2, kUnset)) {}

  // Gaps below 4 are allowed only for the pairs (3k-1, 3k+1) and
  // (3k, 3k+3), i.e. the parts sum to a multiple of 6 or are both
  // divisible by 3.
  bool admissible(long last, long c) const {
    if (c == forbidden_part) return false;
    if (last == 0) return true;
    long diff = c - last;
    if (diff < 2) return false;
    if (diff < 4 && (c + last) % 6 != 0 && !(c % 3 == 0 && last % 3 == 0)) return false;
    return true;
  }

  // Partitions of exactly `budget` whose smallest remaining part respects
  // the adjacency rule against `last` (0 = no part placed yet).
  std::int64_t count(long budget, long last) {
    if (budget == 0) return 1;
    std::int64_t& slot = memo[static_cast<size_t>(budget)][static_cast<size_t>(last)];
    if (slot != kUnset) return slot;
    std::int64_t total = 0;
    long start = last == 0 ? 1 : last + 2;
    for (long c = start; c <= budget; ++c) {
      if (admissible(last, c)) total += count(budget - c, c);
    }
    slot = total;
    return total;
  }
};

// The mod-3 families constrain both adjacent pairs and pairs two apart,
// so the state is the last two parts.
struct KrCounter {
  long n_max;
  int residue;        // required (c + last) mod 3 when c - last <= 1
  long min_part;
  bool forbid_double_two;
  std::vector<std::int64_t> memo;  // [budget][prev][last], 0 == "none"

  KrCounter(long n_max_, int residue_, long min_part_, bool forbid22)
      : n_max(n_max_), residue(residue_), min_part(min_part_), forbid_double_two(forbid22),
        memo(static_cast<size_t>((n_max_ + 1) * (n_max_ + 2) * (n_max_ + 2)), kUnset) {}

  std::int64_t& slot(long budget, long prev, long last) {
    return memo[static_cast<size_t>((budget * (n_max + 2) + prev) * (n_max + 2) + last)];
  }

  bool admissible(long prev, long last, long c) const {
    if (last == 0) return c >= min_part;
    if (c < last) return false;
    if (prev != 0 && c - prev < 3) return false;
    if (c - last <= 1 && (c + last) % 3 != residue) return false;
    if (forbid_double_two && c == 2 && last == 2) return false;
    return true;
  }

  std::int64_t count(long budget, long prev, long last) {
    if (budget == 0) return 1;
    std::int64_t& s = slot(budget, prev, last);
    if (s != kUnset) return s;
    std::int64_t total = 0;
    long start = last == 0 ? min_part : last;
    for (long c = start; c <= budget; ++c) {
      if (admissible(prev, last, c)) total += count(budget - c, last, c);
    }
    s = total;
    return total;
  }
};

}  // namespace

QSeriesTrunc enumerate_condition_partitions(ConditionKind kind, long n_max) {
  if (n_max < 0) throw std::invalid_argument("enumerate_condition_partitions: negative n_max");
  if (n_max > 80) {
    throw std::invalid_argument("enumerate_condition_partitions: n_max capped at 80");
  }
  QSeriesTrunc out(n_max);
  switch (kind) {
    case ConditionKind::cap1:
    case ConditionKind::cap2: {
      CapCounter counter(n_max, kind == ConditionKind::cap1 ? 1 : 2);
      for (long n = 0; n <= n_max; ++n) {
        out.at_rel(n) = BigInt(counter.count(n, 0));
      }
      break;
    }
    case ConditionKind::kr1:
    case ConditionKind::kr2:
    case ConditionKind::kr3:
    case ConditionKind::kr4:
    case ConditionKind::kr5: {
      int residue = 0;
      long min_part = 1;
      bool forbid22 = false;
      switch (kind) {
        case ConditionKind::kr1: break;
        case ConditionKind::kr2: min_part = 2; break;
        case ConditionKind::kr3: min_part = 3; break;
        case ConditionKind::kr4: residue = 2; min_part = 2; break;
        case ConditionKind::kr5: residue = 1; forbid22 = true; break;
        default: break;
      }
      KrCounter counter(n_max, residue, min_part, forbid22);
      for (long n = 0; n <= n_max; ++n) {
        out.at_rel(n) = BigInt(counter.count(n, 0, 0));
      }
      break;
    }
  }
  return out;
}

}  // namespace nahm
