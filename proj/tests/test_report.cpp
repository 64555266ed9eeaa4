#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "couette/commands.hpp"
#include "couette/errors.hpp"
#include "couette/forcing.hpp"
#include "couette/report.hpp"

using namespace couette;
namespace fs = std::filesystem;

namespace {

ResultRecord round_trip(const ResultRecord& record) {
    return record_from_json(nlohmann::ordered_json::parse(to_json(record).dump()));
}

ResultRecord sample_record(Command command, Payload payload) {
    ResultRecord r;
    r.command = command;
    r.timestamp = "2024-06-11T00:00:00Z";
    r.config = {{"answer", 42}, {"list", {1.5, 2.5}}};
    r.payload = std::move(payload);
    r.grid_levels = {64, 96};
    return r;
}

std::vector<SweepResult> sample_sweeps() {
    SweepResult a;
    a.reynolds = 1.0;
    a.skipped = true;
    SweepResult b;
    b.reynolds = 100.0;
    b.max_k2_norm_sq = 0.037621954669738764;
    b.max_dnorm_sq = 0.12912976373768648;
    b.argmax_k2 = {3, -1.1665911493577024};
    b.argmax_dnorm = {1, -0.42480440181517576};
    b.lattice_max_k2_norm_sq = 0.029;
    b.lattice_max_dnorm_sq = 0.105;
    b.points_evaluated = 256;
    b.refine_evaluations = 77;
    b.max_nodes_used = 128;
    b.failures = {{2, 0.5, "scaled residual, \"quoted\""}};
    return {a, b};
}

std::string header_of(const std::string& csv) { return csv.substr(0, csv.find("\r\n")); }

std::size_t count_lines(const std::string& csv) {
    std::size_t n = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++n;
    return n;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("couette_report_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("command and format names") {
    for (const Command c : {Command::solve, Command::sweep_delta, Command::sweep_resolvent, Command::eigs, Command::verify}) {
        CHECK(parse_command(to_string(c)) == c);
    }
    CHECK(to_string(Command::sweep_delta) == "sweep-delta");
    CHECK(parse_formats("csv,json,svg") == std::set<Format>{Format::csv, Format::json, Format::svg});
    CHECK(parse_formats("json") == std::set<Format>{Format::json});
    CHECK_THROWS_AS((void)parse_formats(""), InvalidArgument);
    CHECK_THROWS_AS((void)parse_formats("csv,xml"), InvalidArgument);
    CHECK_THROWS_AS((void)parse_command("plot"), InvalidArgument);
}

TEST_CASE("numbers keep 17 significant digits") {
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("every payload kind survives a JSON round trip") {
    SolvePayload solve;
    solve.params = {2, {0.5, -1.25}, 300.0};
    solve.forcing = "sin";
    solve.norms = {1.0 / 3.0, 2.0, 1e-12};
    solve.forcing_norm_sq = 0.5;
    solve.residual_max = 1e-16;
    solve.condition_estimate = 1e6;
    solve.converged_nodes = 96;
    solve.exact_error = 1e-13;
    solve.warnings = {"condition estimate high"};
    const ResultRecord a = sample_record(Command::solve, solve);
    CHECK(round_trip(a) == a);

    solve.exact_error.reset();
    solve.k0_bound_holds = false;
    const ResultRecord b = sample_record(Command::solve, solve);
    CHECK(round_trip(b) == b);

    const ResultRecord c = sample_record(Command::sweep_delta, sample_sweeps());
    CHECK(round_trip(c) == c);

    ResolventSweepRow row;
    row.reynolds = 400.0;
    row.sup_norm = 14.353065060000001;
    row.lattice_sup = 10.13;
    row.argmax_xi = -0.5;
    row.argmax_k = -1;
    row.k_max = 22;
    row.points_evaluated = 1234;
    row.theorem_region_sup = 0.4;
    row.theorem_region_max_ratio = 0.003;
    row.failures = {{4, 0.0, "singular"}};
    const ResultRecord d = sample_record(Command::sweep_resolvent, std::vector<ResolventSweepRow>{row});
    CHECK(round_trip(d) == d);

    SpectrumReport spec;
    spec.k = 1;
    spec.reynolds = 500.0;
    spec.n_nodes = 96;
    spec.rightmost_eig = {-0.126, -0.5};
    spec.all_eigs_stable = true;
    spec.eigenvalues_kept = 90;
    spec.eigenvalues_discarded = 2;
    spec.refinement_shift = 3e-10;
    const ResultRecord e = sample_record(Command::eigs, std::vector<SpectrumReport>{spec});
    CHECK(round_trip(e) == e);

    const ResultRecord f = sample_record(
        Command::verify, std::vector<SuiteResult>{{"large-k", true, 0.06, 1.01, "detail", 0.1},
                                                  {"spectral-gap", false, 0.83, 0.25, "spread", 1.2}});
    CHECK(round_trip(f) == f);
}

TEST_CASE("JSON schema field names and version") {
    const nlohmann::ordered_json j = to_json(sample_record(Command::sweep_delta, sample_sweeps()));
    std::vector<std::string> keys;
    for (const auto& item : j.items()) keys.push_back(item.key());
    CHECK(keys == std::vector<std::string>{"schema_version", "command", "timestamp", "config", "grid_levels", "payload"});
    CHECK(j["schema_version"] == "1");
    CHECK(j["command"] == "sweep-delta");

    nlohmann::ordered_json bad = j;
    bad["schema_version"] = "2";
    CHECK_THROWS_AS((void)record_from_json(bad), InvalidArgument);
    bad = j;
    bad.erase("payload");
    CHECK_THROWS_AS((void)record_from_json(bad), InvalidArgument);
}

TEST_CASE("delta sweep CSV layout") {
    const std::string csv = delta_sweep_csv(sample_sweeps());
    CHECK(header_of(csv) ==
          "R,max_k2_norm_sq,max_dnorm_sq,argmax_k,argmax_xi,points,failures,argmax_dnorm_k,argmax_dnorm_xi,"
          "lattice_max_k2_norm_sq,lattice_max_dnorm_sq");
    CHECK(count_lines(csv) == 3);
    CHECK(csv.find("\r\n1,,,,,0,0,,,,\r\n") != std::string::npos);
    CHECK(csv.find("100,0.037621954669738764,0.12912976373768648,3,-1.1665911493577024,256,1,") != std::string::npos);
}

TEST_CASE("CSV headers of the other tables") {
    CHECK(header_of(resolvent_sweep_csv({})) ==
          "R,sup_norm,lattice_sup,argmax_k,argmax_xi,k_max,points,failures,theorem_region_sup,"
          "theorem_region_max_ratio,theorem_region_ok,truncation_warning");
    CHECK(header_of(spectrum_csv({})) ==
          "k,R,n_nodes,re_lambda,im_lambda,all_eigs_stable,refinement_shift,kept,discarded");
    CHECK(header_of(verify_csv({})).rfind("suite,passed,measured,threshold", 0) == 0);
}

TEST_CASE("CSV fields with separators are quoted") {
    const std::string csv = verify_csv({{"x", false, 1.0, 0.0, "a, \"b\"", 0.0}});
    CHECK(csv.find("\"a, \"\"b\"\"\"") != std::string::npos);
}

TEST_CASE("SVG plots are self-contained and deterministic") {
    const std::vector<SweepResult> rows = sample_sweeps();
    const std::string a = render_svg(delta_plot(rows, SweepTarget::delta1, "k2"));
    const std::string b = render_svg(delta_plot(rows, SweepTarget::delta1, "k2"));
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("href") == std::string::npos);
    CHECK(a.find("<image") == std::string::npos);
    CHECK(a.find("stroke-dasharray") != std::string::npos);
    CHECK_THROWS_AS((void)delta_plot(rows, SweepTarget::delta1, "energy"), InvalidArgument);

    ResolventSweepRow r1, r2;
    r1.reynolds = 100.0;
    r1.sup_norm = 3.0;
    r2.reynolds = 200.0;
    r2.sup_norm = 6.3;
    const std::string c = render_svg(resolvent_plot({r1, r2}));
    CHECK(c == render_svg(resolvent_plot({r1, r2})));
    CHECK(c.find("<polyline") != std::string::npos);
}

TEST_CASE("run configuration validation") {
    RunConfig config;
    config.output_dir = scratch_dir("config") / "nested";
    CHECK_NOTHROW(config.validate());
    CHECK(fs::is_directory(config.output_dir));
    config.formats.clear();
    CHECK_THROWS_AS(config.validate(), InvalidArgument);

    const fs::path file = scratch_dir("file");
    fs::create_directories(file.parent_path());
    std::ofstream(file) << "x";
    RunConfig blocked;
    blocked.output_dir = file / "sub";
    CHECK_THROWS_AS(blocked.validate(), InvalidArgument);
}

TEST_CASE("solve command writes the requested files") {
    const fs::path dir = scratch_dir("solve");
    RunConfig config;
    config.output_dir = dir;
    config.formats = {Format::csv, Format::json};
    SolveRequest request;
    request.params = {0, {0.0, 1.0}, 100.0};
    request.forcing = "sin";
    request.write_profile = true;
    const ResultRecord record = cmd_solve(request, config);
    const auto& payload = std::get<SolvePayload>(record.payload);
    REQUIRE(payload.k0_bound_holds.has_value());
    CHECK(*payload.k0_bound_holds);
    CHECK(fs::exists(dir / "solve.json"));
    CHECK(fs::exists(dir / "solve.csv"));
    CHECK(fs::exists(dir / "solve_profile.csv"));

    std::ifstream in(dir / "solve.json");
    const ResultRecord back = record_from_json(nlohmann::ordered_json::parse(in));
    CHECK(back == record);
}

TEST_CASE("solve command with a tabulated forcing file") {
    const fs::path dir = scratch_dir("table");
    fs::create_directories(dir);
    {
        std::ofstream table(dir / "forcing.csv");
        table << "y,F_re,F_im,G_re,G_im\n";
        for (int i = 0; i <= 200; ++i) {
            const double y = i / 200.0;
            table << y << "," << std::sin(3.0 * y) << ",0,0," << y * y << "\n";
        }
    }
    RunConfig config;
    config.output_dir = dir;
    SolveRequest request;
    request.params = {2, {0.0, -1.0}, 50.0};
    request.forcing_file = dir / "forcing.csv";
    const ResultRecord record = cmd_solve(request, config);
    const auto& payload = std::get<SolvePayload>(record.payload);
    CHECK(payload.forcing == "table");
    CHECK(payload.norms.norm_sq > 0.0);

    std::istringstream bad("y,F_re,F_im,G_re,G_im\n0,1,0,0,0\n0.5,1,0,0,0\n");
    CHECK_THROWS_AS((void)read_tabulated_forcing(bad), InvalidArgument);
    std::istringstream unordered("y,F_re,F_im,G_re,G_im\n0,1,0,0,0\n0.7,1,0,0,0\n0.5,1,0,0,0\n1,0,0,0,0\n");
    CHECK_THROWS_AS((void)read_tabulated_forcing(unordered), InvalidArgument);
}

TEST_CASE("error JSON carries the error type") {
    const auto type_of = [](const std::exception& e) { return error_json(e)["error"]["type"].get<std::string>(); };
    CHECK(type_of(InvalidArgument("bad")) == "invalid_argument");
    CHECK(type_of(SizingError("small")) == "sizing_error");
    CHECK(type_of(SweepFailed("many")) == "sweep_failed");
    const nlohmann::ordered_json singular = error_json(SingularMatrix("singular", 1e17));
    CHECK(singular["error"]["type"] == "singular_matrix");
    CHECK(singular["error"]["condition_estimate"] == 1e17);
    const nlohmann::ordered_json stalled = error_json(NonConvergence("stalled", {1, 2, 3}, {4, 5, 6}));
    CHECK(stalled["error"]["last_norms"] == nlohmann::ordered_json::array({4.0, 5.0, 6.0}));
    CHECK(error_json(std::runtime_error("x"))["error"]["message"] == "x");
}

TEST_CASE("forcing presets") {
    const GridPtr grid = build_grid(64);
    const ModeParams params{3, {0.0, 2.0}, 200.0};
    for (const std::string& name : forcing_preset_names()) {
        const ForcingCase fc = make_preset_forcing(name, params, grid);
        CHECK(fc.name == name);
        CHECK(fc.scalar.size() == 64);
    }
    CHECK(make_preset_forcing("zero", params, grid).scalar.max_abs() == 0.0);
    CHECK(make_preset_forcing("mms-quartic", params, grid).exact.has_value());
    CHECK_THROWS_AS((void)make_preset_forcing("nope", params, grid), InvalidArgument);
    for (const std::string& name : k0_forcing_presets()) {
        const ForcingCase fc = make_preset_forcing(name, {0, {0.0, 0.0}, 10.0}, grid);
        REQUIRE(fc.forcing.has_value());
        CHECK(fc.forcing->g_hat.max_abs() == 0.0);
        CHECK(fc.forcing->norm_sq > 0.0);
    }
}
