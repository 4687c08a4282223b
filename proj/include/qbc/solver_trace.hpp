#pragma once

#include <cstdint>
#include <string>

namespace qbc {

// Budgets and outcome of a seeded multi-start search, embedded in every report.
struct SolverTrace {
    std::uint64_t seed = 0;
    int restarts = 0;
    int max_iterations = 0;
    double tol = 0.0;
    int iterations = 0;         // summed over restarts
    int best_restart = 0;
    int converged_restarts = 0;  // restarts that met the gradient tolerance
    std::string note;
};

}  // namespace qbc
