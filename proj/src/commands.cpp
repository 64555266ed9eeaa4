#include "couette/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "couette/errors.hpp"
#include "couette/forcing.hpp"

namespace couette {

using ojson = nlohmann::ordered_json;

namespace {

ResultRecord start_record(Command command, ojson config) {
    ResultRecord record;
    record.command = command;
    record.timestamp = utc_timestamp();
    record.config = std::move(config);
    return record;
}

bool wants(const RunConfig& config, Format format) { return config.formats.count(format) > 0; }

void write_json(const ResultRecord& record, const RunConfig& config, const std::string& stem) {
    if (wants(config, Format::json)) write_text_file(config.output_dir / (stem + ".json"), to_json(record).dump(2) + "\n");
}

ojson spec_json(const SweepSpec& spec) {
    return {{"reynolds_list", spec.reynolds_list},
            {"xi_points_per_r", spec.xi_points_per_r},
            {"target", to_string(spec.target)},
            {"rel_tol", spec.rel_tol},
            {"levels", spec.levels},
            {"local_refine", spec.local_refine}};
}

}  // namespace

std::vector<std::size_t> refinement_levels(std::size_t first_nodes) {
    if (first_nodes < SpectralGrid::kMinNodes) throw SizingError("first refinement level is below the minimum grid");
    return {first_nodes, first_nodes * 3 / 2, first_nodes * 2, first_nodes * 3, first_nodes * 4};
}

ResultRecord cmd_solve(const SolveRequest& request, const RunConfig& config) {
    config.validate();
    request.params.validate_resolvent();

    std::optional<TabulatedForcing> table;
    if (request.forcing_file) {
        std::ifstream in(*request.forcing_file);
        if (!in) throw InvalidArgument("cannot read forcing file '" + request.forcing_file->string() + "'");
        table = read_tabulated_forcing(in);
    }
    const auto forcing_on = [&](const GridPtr& grid) {
        return table ? tabulated_forcing_case(*table, request.params.k, grid)
                     : make_preset_forcing(request.forcing, request.params, grid);
    };

    ProblemSpec problem;
    problem.params = request.params;
    problem.forcing = [&](const GridPtr& grid) { return forcing_on(grid).scalar; };
    const std::vector<std::size_t> levels = refinement_levels(request.first_nodes);
    const RefinedSolution refined = refine_until_converged(problem, request.rel_tol, levels);
    const BvpSolution& sol = refined.solution;
    const ForcingCase fc = forcing_on(sol.psi.grid());

    SolvePayload payload;
    payload.params = request.params;
    payload.forcing = table ? "table" : request.forcing;
    payload.norms = sol.norms;
    payload.residual_max = sol.residual_max;
    payload.condition_estimate = sol.condition_estimate;
    payload.converged_nodes = refined.converged_nodes;
    payload.warnings = sol.warnings;
    if (fc.forcing) {
        payload.forcing_norm_sq = fc.forcing->norm_sq;
        if (request.params.k == 0) {
            const double r = request.params.reynolds;
            const double bound = r * r / std::pow(std::numbers::pi, 6) * l2_norm_sq(fc.forcing->f_hat);
            payload.k0_bound_holds = sol.norms.norm_sq <= bound;
        }
    }
    if (fc.exact) {
        const double scale = fc.exact->max_abs();
        payload.exact_error = (sol.psi - *fc.exact).max_abs() / (scale > 0.0 ? scale : 1.0);
    }

    ojson echo{{"k", request.params.k},
               {"s", {request.params.s.real(), request.params.s.imag()}},
               {"reynolds", request.params.reynolds},
               {"forcing", payload.forcing},
               {"first_nodes", request.first_nodes},
               {"rel_tol", request.rel_tol}};
    if (request.forcing_file) echo["forcing_file"] = request.forcing_file->string();
    ResultRecord record = start_record(Command::solve, std::move(echo));
    record.grid_levels = refined.levels_used;
    record.payload = payload;

    write_json(record, config, "solve");
    if (wants(config, Format::csv)) {
        write_text_file(config.output_dir / "solve.csv", solve_csv(payload));
        if (request.write_profile) write_text_file(config.output_dir / "solve_profile.csv", profile_csv(sol));
    }
    return record;
}

ResultRecord cmd_sweep_delta(const SweepSpec& spec, SweepTarget target, const RunConfig& config) {
    config.validate();
    SweepSpec effective = spec;
    effective.target = target;
    const std::vector<SweepResult> rows = run_delta_sweep(effective, target);

    ResultRecord record = start_record(Command::sweep_delta, spec_json(effective));
    for (const auto& row : rows) {
        if (row.max_nodes_used > 0 &&
            std::find(record.grid_levels.begin(), record.grid_levels.end(), row.max_nodes_used) ==
                record.grid_levels.end()) {
            record.grid_levels.push_back(row.max_nodes_used);
        }
    }
    record.payload = rows;

    const std::string stem = "sweep_" + to_string(target);
    write_json(record, config, stem);
    if (wants(config, Format::csv)) write_text_file(config.output_dir / (stem + ".csv"), delta_sweep_csv(rows));
    if (wants(config, Format::svg)) {
        for (const std::string norm : {"k2", "dnorm"}) {
            write_text_file(config.output_dir / (to_string(target) + "_" + norm + ".svg"),
                            render_svg(delta_plot(rows, target, norm)));
        }
    }
    return record;
}

ResultRecord cmd_sweep_resolvent(const SweepSpec& spec, const ResolventSweepOptions& options,
                                 const RunConfig& config) {
    config.validate();
    SweepSpec effective = spec;
    effective.target = SweepTarget::resolvent;
    const std::vector<ResolventSweepRow> rows = run_resolvent_sweep(effective, options);

    ojson echo = spec_json(effective);
    echo["n_nodes"] = options.n_nodes;
    echo["k_max"] = options.k_max;
    echo["include_zero"] = options.include_zero;
    echo["spot_radii"] = options.spot_radii;
    ResultRecord record = start_record(Command::sweep_resolvent, std::move(echo));
    record.grid_levels = {options.n_nodes};
    record.payload = rows;

    write_json(record, config, "sweep_resolvent");
    if (wants(config, Format::csv)) write_text_file(config.output_dir / "sweep_resolvent.csv", resolvent_sweep_csv(rows));
    if (wants(config, Format::svg)) {
        write_text_file(config.output_dir / "resolvent_norm.svg", render_svg(resolvent_plot(rows)));
    }
    return record;
}

ResultRecord cmd_eigs(const EigsRequest& request, const RunConfig& config) {
    config.validate();
    if (request.reynolds_list.empty()) throw InvalidArgument("eigs needs at least one Reynolds number");
    SpectrumOptions options;
    options.refined_nodes = request.refined_nodes;
    std::vector<SpectrumReport> rows;
    for (const double r : request.reynolds_list) {
        rows.push_back(rightmost_eigenvalue(request.k, r, build_grid(request.n_nodes), options));
    }
    ResultRecord record = start_record(Command::eigs, {{"k", request.k},
                                                       {"reynolds_list", request.reynolds_list},
                                                       {"n_nodes", request.n_nodes},
                                                       {"refined_nodes", request.refined_nodes}});
    record.grid_levels = {request.n_nodes};
    record.payload = rows;
    write_json(record, config, "eigs");
    if (wants(config, Format::csv)) write_text_file(config.output_dir / "eigs.csv", spectrum_csv(rows));
    return record;
}

ResultRecord cmd_verify(const VerifyOptions& options, const RunConfig& config) {
    config.validate();
    const std::vector<SuiteResult> rows = run_verify(options);
    ResultRecord record = start_record(Command::verify,
                                       {{"scale", options.scale == VerifyScale::full ? "full" : "desk"},
                                        {"tolerance_scale", options.tolerance_scale},
                                        {"seed", options.seed},
                                        {"suites", options.suites}});
    record.payload = rows;
    write_json(record, config, "verify");
    if (wants(config, Format::csv)) write_text_file(config.output_dir / "verify.csv", verify_csv(rows));
    return record;
}

bool all_passed(const ResultRecord& record) {
    const auto* rows = std::get_if<std::vector<SuiteResult>>(&record.payload);
    if (!rows) return false;
    return std::all_of(rows->begin(), rows->end(), [](const SuiteResult& r) { return r.passed; });
}

ojson error_json(const std::exception& error) {
    ojson body{{"type", "error"}, {"message", error.what()}};
    if (const auto* e = dynamic_cast<const SingularMatrix*>(&error)) {
        body["type"] = "singular_matrix";
        body["condition_estimate"] = e->condition_estimate();
    } else if (const auto* m = dynamic_cast<const MeshTooCoarse*>(&error)) {
        body["type"] = "mesh_too_coarse";
        body["residual"] = m->residual();
    } else if (const auto* n = dynamic_cast<const NonConvergence*>(&error)) {
        body["type"] = "non_convergence";
        body["previous_norms"] = {n->previous().norm_sq, n->previous().dnorm_sq, n->previous().d2norm_sq};
        body["last_norms"] = {n->last().norm_sq, n->last().dnorm_sq, n->last().d2norm_sq};
    } else if (dynamic_cast<const SizingError*>(&error)) {
        body["type"] = "sizing_error";
    } else if (dynamic_cast<const GridMismatch*>(&error)) {
        body["type"] = "grid_mismatch";
    } else if (dynamic_cast<const EndpointViolation*>(&error)) {
        body["type"] = "endpoint_violation";
    } else if (dynamic_cast<const IndefiniteGram*>(&error)) {
        body["type"] = "indefinite_gram";
    } else if (dynamic_cast<const EigenSolverFailure*>(&error)) {
        body["type"] = "eigen_solver_failure";
    } else if (dynamic_cast<const SweepFailed*>(&error)) {
        body["type"] = "sweep_failed";
    } else if (dynamic_cast<const InvalidArgument*>(&error)) {
        body["type"] = "invalid_argument";
    }
    return {{"error", body}};
}

}  // namespace couette
