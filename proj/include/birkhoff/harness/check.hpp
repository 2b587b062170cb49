#pragma once

#include <string>
#include <vector>

#include "birkhoff/harness/config.hpp"
#include "birkhoff/harness/table.hpp"

namespace birkhoff::harness {

/// Outcome of one invariant over its witnesses.
struct CheckRecord {
  std::string name;
  /// Surface and norm the witnesses came from, or "global".
  std::string scope;
  long long witnesses = 0;
  double worst = 0.0;
  double threshold = 0.0;
  /// "<=": pass when worst <= threshold; ">=": pass when worst >= threshold.
  std::string relation = "<=";
  bool pass = true;
  /// First failing witness or error, empty when passing.
  std::string note;
};

struct CheckReport {
  std::vector<CheckRecord> records;
  bool pass() const;
  /// Records with the given name.
  std::vector<const CheckRecord*> find(const std::string& name) const;
};

CheckReport run_check(const RunConfig& cfg);
Table check_table(const CheckReport& report);

}  // namespace birkhoff::harness
