#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "couette/commands.hpp"
#include "couette/errors.hpp"
#include "couette/forcing.hpp"
#include "couette/resolvent.hpp"

namespace py = pybind11;
using namespace couette;

namespace {

RunConfig json_config(Command command, const std::filesystem::path& out_dir) {
    RunConfig config;
    config.command = command;
    config.output_dir = out_dir;
    config.formats = {Format::json};
    return config;
}

// Commands hand back the serialized record; the Python layer parses it.
std::string dump(const ResultRecord& record) { return to_json(record).dump(); }

py::dict mode_report_dict(const ModeNormReport& r) {
    py::dict d;
    d["k"] = r.k;
    d["s"] = r.s;
    d["reynolds"] = r.reynolds;
    d["n_nodes"] = r.n_nodes;
    d["gain"] = r.gain;
    d["theorem1_bound"] = r.theorem1_bound;
    d["within_bound"] = r.within_bound;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of the couette package";

    static py::exception<Error> base_error(m, "CouetteError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<SizingError>(m, "SizingError", PyExc_ValueError);
    py::register_exception<EndpointViolation>(m, "EndpointViolation", PyExc_ValueError);
    py::register_exception<MeshTooCoarse>(m, "MeshTooCoarse", base_error.ptr());

    m.def("forcing_presets", &forcing_preset_names);

    m.def("theorem1_bound", &theorem1_bound, py::arg("s"), py::arg("reynolds"));
    m.def("theorem1_radius", &theorem1_radius, py::arg("reynolds"));
    m.def("default_k_max", &default_k_max, py::arg("reynolds"));

    m.def(
        "mode_gain",
        [](int k, std::complex<double> s, double reynolds, std::size_t n_nodes) {
            ModeNormReport r;
            {
                py::gil_scoped_release release;
                r = mode_gain(ModeParams{k, s, reynolds}, build_grid(n_nodes));
            }
            return mode_report_dict(r);
        },
        py::arg("k"), py::arg("s"), py::arg("reynolds"), py::arg("n_nodes") = 64);

    m.def(
        "global_norm",
        [](std::complex<double> s, double reynolds, int k_max, std::size_t n_nodes) {
            ResolventQuery query{s, reynolds, k_max > 0 ? k_max : default_k_max(reynolds), n_nodes};
            GlobalNormReport r;
            {
                py::gil_scoped_release release;
                r = global_norm(query);
            }
            py::list modes;
            for (const ModeNormReport& mode : r.modes) modes.append(mode_report_dict(mode));
            py::dict d;
            d["norm"] = r.norm;
            d["argmax_k"] = r.argmax_k;
            d["theorem1_bound"] = r.theorem1_bound;
            d["within_bound"] = r.within_bound;
            d["truncation_warning"] = r.truncation_warning;
            d["modes"] = modes;
            return d;
        },
        py::arg("s"), py::arg("reynolds"), py::arg("k_max") = 0, py::arg("n_nodes") = 64);

    m.def(
        "solve_json",
        [](int k, double re_s, double xi, double reynolds, const std::string& forcing,
           std::optional<std::filesystem::path> forcing_file, std::size_t nodes, double rel_tol,
           const std::filesystem::path& out_dir) {
            SolveRequest request;
            request.params = ModeParams{k, {re_s, xi}, reynolds};
            request.forcing = forcing;
            request.forcing_file = std::move(forcing_file);
            request.first_nodes = nodes;
            request.rel_tol = rel_tol;
            py::gil_scoped_release release;
            return dump(cmd_solve(request, json_config(Command::solve, out_dir)));
        },
        py::arg("k"), py::arg("re_s"), py::arg("xi"), py::arg("reynolds"), py::arg("forcing"),
        py::arg("forcing_file"), py::arg("nodes"), py::arg("rel_tol"), py::arg("out_dir"));

    m.def(
        "sweep_delta_json",
        [](const std::string& target, std::vector<double> r_list, std::size_t xi_points, double rel_tol,
           bool refine, const std::filesystem::path& out_dir) {
            SweepSpec spec;
            spec.reynolds_list = std::move(r_list);
            spec.xi_points_per_r = xi_points;
            spec.rel_tol = rel_tol;
            spec.local_refine = refine;
            const SweepTarget which = parse_sweep_target(target);
            spec.target = which;
            py::gil_scoped_release release;
            return dump(cmd_sweep_delta(spec, which, json_config(Command::sweep_delta, out_dir)));
        },
        py::arg("target"), py::arg("r_list"), py::arg("xi_points"), py::arg("rel_tol"), py::arg("refine"),
        py::arg("out_dir"));

    m.def(
        "sweep_resolvent_json",
        [](std::vector<double> r_list, std::size_t xi_points, std::size_t nodes, int k_max, bool refine,
           const std::filesystem::path& out_dir) {
            SweepSpec spec;
            spec.reynolds_list = std::move(r_list);
            spec.xi_points_per_r = xi_points;
            spec.target = SweepTarget::resolvent;
            spec.local_refine = refine;
            ResolventSweepOptions options;
            options.n_nodes = nodes;
            options.k_max = k_max;
            py::gil_scoped_release release;
            return dump(cmd_sweep_resolvent(spec, options, json_config(Command::sweep_resolvent, out_dir)));
        },
        py::arg("r_list"), py::arg("xi_points"), py::arg("nodes"), py::arg("k_max"), py::arg("refine"),
        py::arg("out_dir"));

    m.def(
        "eigs_json",
        [](int k, std::vector<double> r_list, std::size_t nodes, std::size_t refined_nodes,
           const std::filesystem::path& out_dir) {
            EigsRequest request;
            request.k = k;
            request.reynolds_list = std::move(r_list);
            request.n_nodes = nodes;
            request.refined_nodes = refined_nodes;
            py::gil_scoped_release release;
            return dump(cmd_eigs(request, json_config(Command::eigs, out_dir)));
        },
        py::arg("k"), py::arg("r_list"), py::arg("nodes"), py::arg("refined_nodes"), py::arg("out_dir"));

    m.def(
        "verify_json",
        [](std::vector<std::string> suites, double tolerance_scale, std::uint64_t seed,
           const std::filesystem::path& out_dir) {
            VerifyOptions options;
            options.suites = std::move(suites);
            options.tolerance_scale = tolerance_scale;
            options.seed = seed;
            RunConfig config = json_config(Command::verify, out_dir);
            config.seed = seed;
            py::gil_scoped_release release;
            return dump(cmd_verify(options, config));
        },
        py::arg("suites"), py::arg("tolerance_scale"), py::arg("seed"), py::arg("out_dir"));
}
