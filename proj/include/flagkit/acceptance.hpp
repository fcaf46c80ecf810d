#pragma once

// The acceptance suite: one check per criterion, shared by the acceptance
// test binary and `flagkit verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace flagkit {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240607;
  int starts = 200;
  double tol = 1e-10;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS  3  title: detail"
std::string format_result(const CriterionResult& r);

}  // namespace flagkit
