#pragma once

#include <string>
#include <vector>

namespace planarmap {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail; // measured values, human readable
    double seconds = 0.0;
};

// The nine-criterion acceptance suite over the reference maps (exposed by the
// CLI as --suite paper). Every tolerance is pinned here, not in the callers.
std::vector<CriterionResult> run_acceptance_suite();

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace planarmap
