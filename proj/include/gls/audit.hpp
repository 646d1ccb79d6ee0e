#pragma once
// Acceptance audits: one function per criterion, each returning a verdict
// and a deterministic JSON detail block (no timings).

#include <string>
#include <vector>

#include "gls/report.hpp"

namespace gls {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  Json detail;
};

inline constexpr int kAuditCount = 10;

/// Criteria 1..10; determinism of the CLI output is checked by the caller.
CriterionResult audit_criterion(int id);
std::vector<CriterionResult> audit_all();
Json audit_json(const std::vector<CriterionResult>& results);

}  // namespace gls
