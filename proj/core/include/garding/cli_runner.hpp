#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "garding/majorization.hpp"

namespace garding {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Suite names in the fixed documented order ("all" expands to this order so
// margin diffs stay stable across versions).
const std::vector<std::string>& suite_order();

struct RunConfig {
  std::string spec_text;             // operator construction tree (JSON)
  std::vector<std::string> suites;   // subset of suite_order() or "all"
  std::uint64_t seed = 42;
  int samples = 2000;
  int refine_iters = 500;
};

struct RunResult {
  int exit_code = 0;        // 0 all pass, 1 any fail (2 is config/parse level)
  std::string report_json;  // deterministic document
  bool all_pass = false;
};

// Parses the JSON operator construction tree, e.g.
//   {"op":"product","args":[{"op":"sigma_k","n":3,"k":2},
//                           {"op":"radial_derivative","args":[{"op":"det","n":3}]}]}
// Construction-time checks (homogeneity, orthogonality of h, L(I)=kI
// advisories) run during construction and are recorded in operator flags.
OpPtr parse_spec(const std::string& text);

// Executes the selected suites in declared order and assembles the report
// document. Identical (config, seed) -> byte-identical report.
RunResult run(const RunConfig& config);

}  // namespace garding
