#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldt {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured values and tolerances
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 17;
  std::string out_dir;             // when set, CSV evidence per check
  std::vector<std::string> only;   // empty: run everything
  int workers = 0;
  double tol_scale = 1.0;          // tolerance multiplier (0 forces failures)
};

// The full acceptance suite; one result per check, in order.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opt);

const std::vector<std::string>& acceptance_check_names();

}  // namespace ldt
