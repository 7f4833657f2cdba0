#pragma once

// Acceptance checks shared by the acceptance test binary and `affperm verify`.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace affperm::verify {

enum class Level { Quick, Full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Runs every criterion at `level` (quick uses smaller sweeps where the
/// criterion allows it), printing one PASS/FAIL line each to `out`.
std::vector<CriterionResult> run_all(Level level, std::ostream& out, const std::vector<int>& only = {});

}  // namespace affperm::verify
