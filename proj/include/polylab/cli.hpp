#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polylab {

/// Exit codes: 0 ok, 1 input error, 2 tester reject, 3 budget exhaustion.
enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitReject = 2,
    kExitBudget = 3,
};

/// Echoed into every report. All randomness flows from `seed`.
struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::size_t table_budget = 0;  // 0 = library default (or POLYLAB_BUDGET_MB)
    int threads = 1;
    int c_max = 4;
    int r_max = 1;
    int growth_budget = 2;
    int iteration_cap = 32;
    std::size_t pool_cap = 256;
    std::string output;  // empty = stdout
    std::string format = "json";
};

/// Dispatches one CLI invocation (argv without the program name).
int run_command(const std::vector<std::string>& args);

}  // namespace polylab
