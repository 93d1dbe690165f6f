#pragma once

#include <string>
#include <vector>

namespace multiest {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult run_criterion(int index);  // 1..10
std::vector<CriterionResult> run_all_criteria();

}  // namespace multiest
