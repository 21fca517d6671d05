#ifndef CSMD_ACCEPTANCE_HPP
#define CSMD_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace csmd {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOutcome {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
};

// Runs the full acceptance matrix and writes results.csv, summary.json and
// acceptance.txt into out_dir. One PASS/FAIL line per criterion.
AcceptanceOutcome run_acceptance(std::uint64_t base_seed, int jobs,
                                 const std::string &out_dir);

}  // namespace csmd

#endif  // CSMD_ACCEPTANCE_HPP
