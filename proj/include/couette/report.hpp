#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "couette/bvp_solver.hpp"
#include "couette/resolvent.hpp"
#include "couette/sweep.hpp"
#include "couette/verify.hpp"

namespace couette {

inline constexpr const char* kSchemaVersion = "1";

enum class Command { solve, sweep_delta, sweep_resolvent, eigs, verify };
enum class Format { csv, json, svg };

[[nodiscard]] std::string to_string(Command command);
[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] std::string to_string(Format format);
[[nodiscard]] Format parse_format(const std::string& name);
/// Comma-separated list such as "csv,json"; InvalidArgument when empty.
[[nodiscard]] std::set<Format> parse_formats(const std::string& list);

struct RunConfig {
    Command command = Command::solve;
    /// Command-specific parameters, echoed into the result record.
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::filesystem::path output_dir = ".";
    std::set<Format> formats{Format::json};
    std::uint64_t seed = 20240611;

    /// formats nonempty and output_dir creatable and writable.
    void validate() const;
};

struct SolvePayload {
    ModeParams params;
    std::string forcing;
    NormTriple norms;
    double forcing_norm_sq = 0.0;  ///< ||F||^2 + ||G||^2 when defined
    double residual_max = 0.0;
    double condition_estimate = 0.0;
    std::size_t converged_nodes = 0;
    std::optional<double> exact_error;   ///< manufactured presets
    std::optional<bool> k0_bound_holds;  ///< k = 0: ||psi||^2 <= R^2 / pi^6 ||F||^2
    std::vector<std::string> warnings;

    friend bool operator==(const SolvePayload&, const SolvePayload&) = default;
};

using Payload = std::variant<SolvePayload, std::vector<SweepResult>, std::vector<ResolventSweepRow>,
                             std::vector<SpectrumReport>, std::vector<SuiteResult>>;

struct ResultRecord {
    std::string schema_version = kSchemaVersion;
    Command command = Command::solve;
    std::string timestamp;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    Payload payload;
    /// Grid sizes visited by the refinement loop (solve) or used by the run.
    std::vector<std::size_t> grid_levels;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

[[nodiscard]] nlohmann::ordered_json to_json(const ResultRecord& record);
/// InvalidArgument on a missing field or an unsupported schema version.
[[nodiscard]] ResultRecord record_from_json(const nlohmann::ordered_json& j);

/// Current UTC time, ISO 8601 to the second.
[[nodiscard]] std::string utc_timestamp();

/// 17 significant digits; round-trips every finite double.
[[nodiscard]] std::string format_number(double value);

/// R,max_k2_norm_sq,max_dnorm_sq,argmax_k,argmax_xi,points,failures,
/// argmax_dnorm_k,argmax_dnorm_xi,lattice_max_k2_norm_sq,lattice_max_dnorm_sq.
/// argmax_k/argmax_xi locate max_k2_norm_sq. Skipped R rows leave the value
/// columns empty.
[[nodiscard]] std::string delta_sweep_csv(const std::vector<SweepResult>& rows);
[[nodiscard]] std::string resolvent_sweep_csv(const std::vector<ResolventSweepRow>& rows);
[[nodiscard]] std::string spectrum_csv(const std::vector<SpectrumReport>& rows);
[[nodiscard]] std::string solve_csv(const SolvePayload& payload);
/// y, psi, psi', psi'' (real and imaginary parts) at every node.
[[nodiscard]] std::string profile_csv(const BvpSolution& solution);
[[nodiscard]] std::string verify_csv(const std::vector<SuiteResult>& rows);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    bool log_x = true;
    /// Dashed horizontal line, e.g. the envelope value 1.
    std::optional<double> reference_y;
};

/// Self-contained SVG line plot; identical input gives identical bytes.
[[nodiscard]] std::string render_svg(const PlotSpec& spec);

/// max k^2 ||delta||^2 (norm = "k2") or max ||delta'||^2 (norm = "dnorm") vs R.
[[nodiscard]] PlotSpec delta_plot(const std::vector<SweepResult>& rows, SweepTarget target, const std::string& norm);
[[nodiscard]] PlotSpec resolvent_plot(const std::vector<ResolventSweepRow>& rows);

/// Writes content to path, creating parent directories. Writes from worker
/// threads are serialized.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace couette
