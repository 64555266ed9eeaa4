#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace couette {

enum class VerifyScale { desk, full };

struct VerifyOptions {
    VerifyScale scale = VerifyScale::desk;
    /// Multiplies every tolerance; 0 makes every suite fail.
    double tolerance_scale = 1.0;
    std::uint64_t seed = 20240611;
    /// Suites to run, by name; empty runs all of them.
    std::vector<std::string> suites;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
    double seconds = 0.0;

    friend bool operator==(const SuiteResult&, const SuiteResult&) = default;
};

/// manufactured-solution, decomposition-identity, theorem1-region,
/// delta-envelope, large-k, k0-estimate, resolvent-scaling, spectral-gap,
/// mesh-robustness.
[[nodiscard]] std::vector<std::string> suite_names();

/// Runs the selected suites in order. Each passes when measured <= threshold
/// (strictly below for the error-type suites). InvalidArgument for unknown names.
[[nodiscard]] std::vector<SuiteResult> run_verify(const VerifyOptions& options);

}  // namespace couette
