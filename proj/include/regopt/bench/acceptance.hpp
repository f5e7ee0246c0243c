#pragma once

#include <string>
#include <vector>

namespace regopt::bench {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 11;

// Runs one acceptance criterion (1..kCriterionCount). Exceptions thrown by the
// solvers are caught and reported as a failure with the message as detail.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_acceptance_suite();

// "[PASS] 1 strong convergence (gprm) ... detail"
std::string format_result(const CriterionResult& r);

}  // namespace regopt::bench
