// couette: per-mode Couette-flow solves, delta and resolvent sweeps, spectra
// and verification suites from the command line.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "couette/commands.hpp"
#include "couette/errors.hpp"
#include "couette/forcing.hpp"

namespace {

using namespace couette;

struct Common {
    std::string out = ".";
    std::string format = "csv,json";
    std::uint64_t seed = 20240611;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--out", common.out, "Output directory")->capture_default_str();
    cmd->add_option("--format", common.format, "Comma-separated output formats: csv, json, svg")->capture_default_str();
}

RunConfig make_config(Command command, const Common& common) {
    RunConfig config;
    config.command = command;
    config.output_dir = common.out;
    config.formats = parse_formats(common.format);
    config.seed = common.seed;
    return config;
}

void print_summary(const ResultRecord& record) {
    std::cout << to_json(record).dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver and sweeps for 2-D plane Couette flow resolvent estimates"};
    app.require_subcommand(1);
    Common common;

    // solve
    SolveRequest solve;
    double xi = 0.0, re_s = 0.0;
    std::string forcing_file;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one clamped mode problem with refinement");
    solve_cmd->add_option("--k", solve.params.k, "Wavenumber")->capture_default_str();
    solve_cmd->add_option("--xi", xi, "Imaginary part of s")->capture_default_str();
    solve_cmd->add_option("--re-s", re_s, "Real part of s (>= 0)")->capture_default_str();
    solve_cmd->add_option("--reynolds", solve.params.reynolds, "Reynolds number")->required();
    solve_cmd->add_option("--forcing", solve.forcing, "Forcing preset")
        ->check(CLI::IsMember(forcing_preset_names()))
        ->capture_default_str();
    solve_cmd->add_option("--forcing-file", forcing_file, "CSV table y,F_re,F_im,G_re,G_im (overrides --forcing)");
    solve_cmd->add_option("--nodes", solve.first_nodes, "First refinement level")->capture_default_str();
    solve_cmd->add_option("--rel-tol", solve.rel_tol, "Relative refinement tolerance")->capture_default_str();
    solve_cmd->add_flag("--profile", solve.write_profile, "Also write the solution profile CSV");
    add_common(solve_cmd, common);

    // sweep-delta
    SweepSpec delta_spec;
    std::string target = "delta1";
    std::vector<std::size_t> delta_levels;
    bool delta_no_refine = false;
    auto* delta_cmd = app.add_subcommand("sweep-delta", "Maximize k^2 ||delta_j||^2 and ||delta_j'||^2 over (k, xi)");
    delta_cmd->add_option("--target", target, "delta1 or delta2")
        ->check(CLI::IsMember({"delta1", "delta2"}))
        ->capture_default_str();
    delta_cmd->add_option("--r-list", delta_spec.reynolds_list, "Increasing Reynolds numbers")
        ->delimiter(',')
        ->required();
    delta_cmd->add_option("--xi-points", delta_spec.xi_points_per_r, "Base xi lattice points per R")
        ->capture_default_str();
    delta_cmd->add_option("--rel-tol", delta_spec.rel_tol, "Relative refinement tolerance")->capture_default_str();
    delta_cmd->add_option("--nodes", delta_levels, "First refinement level (ladder n, 3n/2, 2n, 3n, 4n)")
        ->expected(1);
    delta_cmd->add_flag("--no-refine", delta_no_refine, "Report lattice maxima only");
    add_common(delta_cmd, common);

    // sweep-resolvent
    SweepSpec res_spec;
    ResolventSweepOptions res_opts;
    bool res_no_refine = false;
    auto* res_cmd = app.add_subcommand("sweep-resolvent", "Supremum of the resolvent norm over s = i xi, per R");
    res_cmd->add_option("--r-list", res_spec.reynolds_list, "Increasing Reynolds numbers")->delimiter(',')->required();
    res_cmd->add_option("--xi-points", res_spec.xi_points_per_r, "Base xi lattice points per R")->capture_default_str();
    res_cmd->add_option("--nodes", res_opts.n_nodes, "Grid size")->capture_default_str();
    res_cmd->add_option("--k-max", res_opts.k_max, "Mode truncation (0: ceil(sqrt(R / sqrt 2)) + 5)")
        ->capture_default_str();
    res_cmd->add_flag("--no-refine", res_no_refine, "Report lattice maxima only");
    add_common(res_cmd, common);

    // eigs
    EigsRequest eigs;
    std::vector<double> eig_r;
    auto* eigs_cmd = app.add_subcommand("eigs", "Rightmost eigenvalue of the mode operator");
    eigs_cmd->add_option("--k", eigs.k, "Wavenumber")->capture_default_str();
    eigs_cmd->add_option("--reynolds,--r-list", eig_r, "Reynolds number(s)")->delimiter(',')->required();
    eigs_cmd->add_option("--nodes", eigs.n_nodes, "Grid size")->capture_default_str();
    eigs_cmd->add_option("--refine-nodes", eigs.refined_nodes, "Grid size of the refinement check (0: 3n/2)")
        ->capture_default_str();
    add_common(eigs_cmd, common);

    // verify
    VerifyOptions verify;
    std::string scale = "desk";
    auto* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
    verify_cmd->add_option("--scale", scale, "desk or full")
        ->check(CLI::IsMember({"desk", "full"}))
        ->capture_default_str();
    verify_cmd->add_option("--tolerance-scale", verify.tolerance_scale, "Multiplier on every tolerance (0 forces failure)")
        ->capture_default_str();
    verify_cmd->add_option("--suite", verify.suites, "Run only the named suite (repeatable)")
        ->check(CLI::IsMember(suite_names()));
    verify_cmd->add_option("--seed", common.seed, "Seed of the randomized suites")->capture_default_str();
    add_common(verify_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve_cmd->parsed()) {
            solve.params.s = {re_s, xi};
            if (!forcing_file.empty()) solve.forcing_file = forcing_file;
            print_summary(cmd_solve(solve, make_config(Command::solve, common)));
        } else if (delta_cmd->parsed()) {
            if (!delta_levels.empty()) delta_spec.levels = refinement_levels(delta_levels.front());
            delta_spec.local_refine = !delta_no_refine;
            const ResultRecord record =
                cmd_sweep_delta(delta_spec, parse_sweep_target(target), make_config(Command::sweep_delta, common));
            std::cout << delta_sweep_csv(std::get<std::vector<SweepResult>>(record.payload));
        } else if (res_cmd->parsed()) {
            res_spec.local_refine = !res_no_refine;
            const ResultRecord record =
                cmd_sweep_resolvent(res_spec, res_opts, make_config(Command::sweep_resolvent, common));
            std::cout << resolvent_sweep_csv(std::get<std::vector<ResolventSweepRow>>(record.payload));
        } else if (eigs_cmd->parsed()) {
            eigs.reynolds_list = eig_r;
            const ResultRecord record = cmd_eigs(eigs, make_config(Command::eigs, common));
            std::cout << spectrum_csv(std::get<std::vector<SpectrumReport>>(record.payload));
        } else if (verify_cmd->parsed()) {
            verify.scale = scale == "full" ? VerifyScale::full : VerifyScale::desk;
            verify.seed = common.seed;
            const ResultRecord record = cmd_verify(verify, make_config(Command::verify, common));
            for (const SuiteResult& r : std::get<std::vector<SuiteResult>>(record.payload)) {
                std::printf("%s %-24s measured=%.6g threshold=%.6g (%.1f s) %s\n", r.passed ? "PASS" : "FAIL",
                            r.name.c_str(), r.measured, r.threshold, r.seconds, r.detail.c_str());
            }
            return all_passed(record) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << error_json(e).dump() << "\n";
        return 2;
    }
    return 0;
}
