#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lrcs::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kSolver = 4 };

/// Runs one CLI invocation. `args` excludes the program name. Library errors
/// are reported on `err` and mapped to the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchRow {
    std::string suite;
    std::string method;
    double nsmse = 0.0;
    double seconds = 0.0;
    int rank = 0;
    int iterations = 0;
};

struct BenchOptions {
    std::uint64_t seed = 1;
    int phantom_frames = 128;
};

/// Runs one experiment suite and returns one row per method.
std::vector<BenchRow> run_bench_suite(const std::string& suite, const BenchOptions& opts, std::ostream& log);

const std::vector<std::string>& bench_suites();

}  // namespace lrcs::cli
