#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace trisys {

// The construction/verification table behind the `report` CLI subcommand:
// builds the catalog algebras that exist at the given prime, checks the
// expected dimensions and simplicity verdicts (plus the Cartan relations for
// the 10-dimensional family), and prints one row per entry. Deterministic
// given (p, seed).
struct ReportRow {
  std::string name;
  std::string detail;
  bool pass = false;
};
struct ReportResult {
  std::vector<ReportRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return !rows.empty();
  }
  nlohmann::json to_json() const;
};

ReportResult run_report(int64_t p, uint64_t seed, std::ostream& out);

}  // namespace trisys
