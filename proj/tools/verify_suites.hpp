#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cf/fields.hpp"

namespace cfcli {

// One named deterministic check. `values` is a flat object of the quantities
// the check compared, serialized verbatim into reports.
struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::ordered_json values;
};

std::vector<CheckResult> verify_moments();
std::vector<CheckResult> verify_fock();
std::vector<CheckResult> verify_fields(const cf::FieldModel& m, double ds_tolerance);
std::vector<CheckResult> verify_arith();

}  // namespace cfcli
