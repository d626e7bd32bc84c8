#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0;
};

// Runs the acceptance criteria (all 12 when `only` is empty), streaming one
// pass/fail line per criterion to `live` when given.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {},
                                            std::ostream* live = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace smlab
