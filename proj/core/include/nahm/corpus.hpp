#pragma once

#include <optional>
#include <string>

#include "nahm/nahm_datum.hpp"
#include "nahm/partitions.hpp"
#include "nahm/qseries.hpp"

namespace nahm {

/// A named (A, J) pair the searches perturb.
struct FamilySpec {
  std::string name;
  std::vector<std::vector<Rational>> A;
  std::vector<int> J;
};

/// One identity: every sum form (a list of Nahm data summed termwise) must
/// match the product side coefficient-for-coefficient.
struct Identity {
  std::string name;
  std::string family;
  std::vector<std::vector<NahmDatum>> sum_forms;
  ProductSpec product;
  std::optional<ConditionKind> condition;
};

const std::vector<FamilySpec>& families();
const FamilySpec& family(const std::string& name);

const std::vector<Identity>& corpus();
const Identity* find_identity(const std::string& name);

}  // namespace nahm
