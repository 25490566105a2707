#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ldrw {

struct CriterionResult {
    std::string name;
    bool pass = false;
    double seconds = 0;
    std::string detail;
};

// Runs the full verification suite: closed-form rate values, dual
// identification, eigenvalue oracle and optimizer agreement, the quadratic
// tilt bracket, Monte Carlo consistency, metric axioms, rate-function
// properties, and the intersection-rate curve. One line per criterion is
// written to `log` when given.
std::vector<CriterionResult> run_acceptance(std::ostream* log = nullptr, int threads = 0);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace ldrw
