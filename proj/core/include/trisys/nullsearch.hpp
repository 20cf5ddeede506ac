#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trisys/triples.hpp"

namespace trisys {

// Random search for simple null symplectic triple systems: samples random
// totally symmetric tensors, keeps those satisfying the derivation identity
// (checked exactly), and runs the inder-submodule simplicity search on the
// survivors. Evidence-gathering only; the sampled fraction of the space is
// reported as coverage.
struct NullSearchResult {
  int dim = 0;
  int64_t p = 3;
  uint64_t seed = 0;
  int64_t trials = 0;
  int64_t derivation_pass = 0;
  int64_t simple_found = 0;
  int64_t simple_dim_gt2 = 0;  // would bear on the dimension-2 conjecture
  // the simple instances, serialized, with their simplicity transcripts
  std::vector<std::string> simple_instances;
  double coverage = 0.0;  // trials / |tensor space|, capped at 1
  bool dxx_square_zero_ok = true;  // checked on survivors when p >= 5
  nlohmann::json to_json() const;
};

NullSearchResult search_null_sts(int dim, int64_t p, int64_t trials, uint64_t seed,
                                 std::ostream* log = nullptr);

}  // namespace trisys
