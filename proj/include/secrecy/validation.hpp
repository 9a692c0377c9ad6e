#pragma once

#include <cstdint>
#include <string>

// Acceptance checks shared by `secrecy validate` and the acceptance test.
namespace secrecy::validation {

inline constexpr int kCheckCount = 9;

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  bool quick = false;                    // reduced grids and sample counts
  std::uint64_t mc_samples = 10'000'000;
  std::uint64_t seed = 42;
  double fault_cm_scale = 1.0;           // scales c_m on the closed-form side
  unsigned workers = 0;
};

/// Runs check `id` in 1..kCheckCount.
CheckResult run_check(int id, const ValidationOptions& opts);

/// "PASS [id] name: detail (t s)".
std::string format_result(const CheckResult& r);

}  // namespace secrecy::validation
