#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "couette/report.hpp"

namespace couette {

struct SolveRequest {
    ModeParams params;
    /// Preset name (see forcing_preset_names); ignored when forcing_file is set.
    std::string forcing = "sin";
    std::optional<std::filesystem::path> forcing_file;
    /// First refinement level; later levels are 3/2, 2, 3 and 4 times this.
    std::size_t first_nodes = 64;
    double rel_tol = 1e-6;
    bool write_profile = false;
};

struct EigsRequest {
    int k = 1;
    std::vector<double> reynolds_list;
    std::size_t n_nodes = 96;
    /// 0 means n + n / 2.
    std::size_t refined_nodes = 0;
};

/// Refinement ladder n, 3n/2, 2n, 3n, 4n.
[[nodiscard]] std::vector<std::size_t> refinement_levels(std::size_t first_nodes);

/// Each command runs, fills a ResultRecord, and writes the requested formats
/// into config.output_dir (file names are listed in the README).
[[nodiscard]] ResultRecord cmd_solve(const SolveRequest& request, const RunConfig& config);
[[nodiscard]] ResultRecord cmd_sweep_delta(const SweepSpec& spec, SweepTarget target, const RunConfig& config);
[[nodiscard]] ResultRecord cmd_sweep_resolvent(const SweepSpec& spec, const ResolventSweepOptions& options,
                                               const RunConfig& config);
[[nodiscard]] ResultRecord cmd_eigs(const EigsRequest& request, const RunConfig& config);
[[nodiscard]] ResultRecord cmd_verify(const VerifyOptions& options, const RunConfig& config);

/// True when every suite of a verify record passed.
[[nodiscard]] bool all_passed(const ResultRecord& record);

/// {"error": {"type": ..., "message": ..., plus type-specific fields}}.
[[nodiscard]] nlohmann::ordered_json error_json(const std::exception& error);

}  // namespace couette
