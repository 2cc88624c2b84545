#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frac::cli {

/// Runs one command line (argv[0] is the program name). Writes the result to
/// `out` and diagnostics to `err`. Returns 0 on success, 1 on a domain or
/// parameter error (including bad usage), 2 when a resource cap is hit.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SuiteResult {
    int id = 0;
    std::string name;
    bool passed = false;
    long checks = 0;
    long failures = 0;
    std::string first_failure;
};

/// The invariant suites behind `verify`, in order:
///   1 blocked_sum = naive_sum, 2 decomposition residual, 3 exponent-pair
///   algebra, 4 convolution exponent table, 5 mean-value constants.
std::vector<SuiteResult> run_verify();

} // namespace frac::cli
