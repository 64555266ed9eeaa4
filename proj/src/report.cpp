#include "couette/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "couette/errors.hpp"

namespace couette {

using ojson = nlohmann::ordered_json;

std::string to_string(Command command) {
    switch (command) {
        case Command::solve: return "solve";
        case Command::sweep_delta: return "sweep-delta";
        case Command::sweep_resolvent: return "sweep-resolvent";
        case Command::eigs: return "eigs";
        case Command::verify: return "verify";
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    for (const Command c : {Command::solve, Command::sweep_delta, Command::sweep_resolvent, Command::eigs,
                            Command::verify}) {
        if (to_string(c) == name) return c;
    }
    throw InvalidArgument("unknown command '" + name + "'");
}

std::string to_string(Format format) {
    switch (format) {
        case Format::csv: return "csv";
        case Format::json: return "json";
        case Format::svg: return "svg";
    }
    return "unknown";
}

Format parse_format(const std::string& name) {
    for (const Format f : {Format::csv, Format::json, Format::svg}) {
        if (to_string(f) == name) return f;
    }
    throw InvalidArgument("unknown format '" + name + "' (expected csv, json or svg)");
}

std::set<Format> parse_formats(const std::string& list) {
    std::set<Format> formats;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) formats.insert(parse_format(item));
    }
    if (formats.empty()) throw InvalidArgument("at least one output format is required");
    return formats;
}

void RunConfig::validate() const {
    if (formats.empty()) throw InvalidArgument("at least one output format is required");
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec || !std::filesystem::is_directory(output_dir)) {
        throw InvalidArgument("output directory '" + output_dir.string() + "' cannot be created");
    }
    const auto probe = output_dir / ".couette-write-test";
    {
        std::ofstream out(probe);
        if (!out) throw InvalidArgument("output directory '" + output_dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

// ---- JSON ----------------------------------------------------------------

namespace {

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }
cplx complex_from(const ojson& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

ojson params_json(const ModeParams& p) { return {{"k", p.k}, {"s", complex_json(p.s)}, {"reynolds", p.reynolds}}; }
ModeParams params_from(const ojson& j) {
    return {j.at("k").get<int>(), complex_from(j.at("s")), j.at("reynolds").get<double>()};
}

ojson norms_json(const NormTriple& n) {
    return {{"norm_sq", n.norm_sq}, {"dnorm_sq", n.dnorm_sq}, {"d2norm_sq", n.d2norm_sq}};
}
NormTriple norms_from(const ojson& j) {
    return {j.at("norm_sq").get<double>(), j.at("dnorm_sq").get<double>(), j.at("d2norm_sq").get<double>()};
}

ojson point_json(const LatticePoint& p) { return {{"k", p.k}, {"xi", p.xi}}; }
LatticePoint point_from(const ojson& j) { return {j.at("k").get<int>(), j.at("xi").get<double>()}; }

ojson failures_json(const std::vector<PointFailure>& failures) {
    ojson out = ojson::array();
    for (const auto& f : failures) out.push_back({{"k", f.k}, {"xi", f.xi}, {"error", f.error}});
    return out;
}
std::vector<PointFailure> failures_from(const ojson& j) {
    std::vector<PointFailure> out;
    for (const auto& f : j) out.push_back({f.at("k").get<int>(), f.at("xi").get<double>(), f.at("error").get<std::string>()});
    return out;
}

template <class T>
ojson optional_json(const std::optional<T>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}
template <class T>
std::optional<T> optional_from(const ojson& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

ojson payload_json(const SolvePayload& p) {
    return {{"params", params_json(p.params)},
            {"forcing", p.forcing},
            {"norms", norms_json(p.norms)},
            {"forcing_norm_sq", p.forcing_norm_sq},
            {"residual_max", p.residual_max},
            {"condition_estimate", p.condition_estimate},
            {"converged_nodes", p.converged_nodes},
            {"exact_error", optional_json(p.exact_error)},
            {"k0_bound_holds", optional_json(p.k0_bound_holds)},
            {"warnings", p.warnings}};
}

SolvePayload solve_from(const ojson& j) {
    SolvePayload p;
    p.params = params_from(j.at("params"));
    p.forcing = j.at("forcing").get<std::string>();
    p.norms = norms_from(j.at("norms"));
    p.forcing_norm_sq = j.at("forcing_norm_sq").get<double>();
    p.residual_max = j.at("residual_max").get<double>();
    p.condition_estimate = j.at("condition_estimate").get<double>();
    p.converged_nodes = j.at("converged_nodes").get<std::size_t>();
    p.exact_error = optional_from<double>(j.at("exact_error"));
    p.k0_bound_holds = optional_from<bool>(j.at("k0_bound_holds"));
    p.warnings = j.at("warnings").get<std::vector<std::string>>();
    return p;
}

ojson payload_json(const std::vector<SweepResult>& rows) {
    ojson out = ojson::array();
    for (const auto& r : rows) {
        out.push_back({{"reynolds", r.reynolds},
                       {"skipped", r.skipped},
                       {"max_k2_norm_sq", r.max_k2_norm_sq},
                       {"max_dnorm_sq", r.max_dnorm_sq},
                       {"argmax_k2", point_json(r.argmax_k2)},
                       {"argmax_dnorm", point_json(r.argmax_dnorm)},
                       {"lattice_max_k2_norm_sq", r.lattice_max_k2_norm_sq},
                       {"lattice_max_dnorm_sq", r.lattice_max_dnorm_sq},
                       {"points_evaluated", r.points_evaluated},
                       {"refine_evaluations", r.refine_evaluations},
                       {"max_nodes_used", r.max_nodes_used},
                       {"failures", failures_json(r.failures)}});
    }
    return out;
}

std::vector<SweepResult> sweeps_from(const ojson& j) {
    std::vector<SweepResult> rows;
    for (const auto& e : j) {
        SweepResult r;
        r.reynolds = e.at("reynolds").get<double>();
        r.skipped = e.at("skipped").get<bool>();
        r.max_k2_norm_sq = e.at("max_k2_norm_sq").get<double>();
        r.max_dnorm_sq = e.at("max_dnorm_sq").get<double>();
        r.argmax_k2 = point_from(e.at("argmax_k2"));
        r.argmax_dnorm = point_from(e.at("argmax_dnorm"));
        r.lattice_max_k2_norm_sq = e.at("lattice_max_k2_norm_sq").get<double>();
        r.lattice_max_dnorm_sq = e.at("lattice_max_dnorm_sq").get<double>();
        r.points_evaluated = e.at("points_evaluated").get<std::size_t>();
        r.refine_evaluations = e.at("refine_evaluations").get<std::size_t>();
        r.max_nodes_used = e.at("max_nodes_used").get<std::size_t>();
        r.failures = failures_from(e.at("failures"));
        rows.push_back(std::move(r));
    }
    return rows;
}

ojson payload_json(const std::vector<ResolventSweepRow>& rows) {
    ojson out = ojson::array();
    for (const auto& r : rows) {
        out.push_back({{"reynolds", r.reynolds},
                       {"sup_norm", r.sup_norm},
                       {"lattice_sup", r.lattice_sup},
                       {"argmax_xi", r.argmax_xi},
                       {"argmax_k", r.argmax_k},
                       {"k_max", r.k_max},
                       {"points_evaluated", r.points_evaluated},
                       {"theorem_region_sup", r.theorem_region_sup},
                       {"theorem_region_max_ratio", r.theorem_region_max_ratio},
                       {"theorem_region_ok", r.theorem_region_ok},
                       {"truncation_warning", r.truncation_warning},
                       {"failures", failures_json(r.failures)}});
    }
    return out;
}

std::vector<ResolventSweepRow> resolvent_rows_from(const ojson& j) {
    std::vector<ResolventSweepRow> rows;
    for (const auto& e : j) {
        ResolventSweepRow r;
        r.reynolds = e.at("reynolds").get<double>();
        r.sup_norm = e.at("sup_norm").get<double>();
        r.lattice_sup = e.at("lattice_sup").get<double>();
        r.argmax_xi = e.at("argmax_xi").get<double>();
        r.argmax_k = e.at("argmax_k").get<int>();
        r.k_max = e.at("k_max").get<int>();
        r.points_evaluated = e.at("points_evaluated").get<std::size_t>();
        r.theorem_region_sup = e.at("theorem_region_sup").get<double>();
        r.theorem_region_max_ratio = e.at("theorem_region_max_ratio").get<double>();
        r.theorem_region_ok = e.at("theorem_region_ok").get<bool>();
        r.truncation_warning = e.at("truncation_warning").get<bool>();
        r.failures = failures_from(e.at("failures"));
        rows.push_back(std::move(r));
    }
    return rows;
}

ojson payload_json(const std::vector<SpectrumReport>& rows) {
    ojson out = ojson::array();
    for (const auto& r : rows) {
        out.push_back({{"k", r.k},
                       {"reynolds", r.reynolds},
                       {"n_nodes", r.n_nodes},
                       {"rightmost_eig", complex_json(r.rightmost_eig)},
                       {"all_eigs_stable", r.all_eigs_stable},
                       {"eigenvalues_kept", r.eigenvalues_kept},
                       {"eigenvalues_discarded", r.eigenvalues_discarded},
                       {"refinement_shift", optional_json(r.refinement_shift)},
                       {"warnings", r.warnings}});
    }
    return out;
}

std::vector<SpectrumReport> spectra_from(const ojson& j) {
    std::vector<SpectrumReport> rows;
    for (const auto& e : j) {
        SpectrumReport r;
        r.k = e.at("k").get<int>();
        r.reynolds = e.at("reynolds").get<double>();
        r.n_nodes = e.at("n_nodes").get<std::size_t>();
        r.rightmost_eig = complex_from(e.at("rightmost_eig"));
        r.all_eigs_stable = e.at("all_eigs_stable").get<bool>();
        r.eigenvalues_kept = e.at("eigenvalues_kept").get<std::size_t>();
        r.eigenvalues_discarded = e.at("eigenvalues_discarded").get<std::size_t>();
        r.refinement_shift = optional_from<double>(e.at("refinement_shift"));
        r.warnings = e.at("warnings").get<std::vector<std::string>>();
        rows.push_back(std::move(r));
    }
    return rows;
}

ojson payload_json(const std::vector<SuiteResult>& rows) {
    ojson out = ojson::array();
    for (const auto& r : rows) {
        out.push_back({{"name", r.name},
                       {"passed", r.passed},
                       {"measured", r.measured},
                       {"threshold", r.threshold},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
    }
    return out;
}

std::vector<SuiteResult> suites_from(const ojson& j) {
    std::vector<SuiteResult> rows;
    for (const auto& e : j) {
        rows.push_back({e.at("name").get<std::string>(), e.at("passed").get<bool>(), e.at("measured").get<double>(),
                        e.at("threshold").get<double>(), e.at("detail").get<std::string>(),
                        e.at("seconds").get<double>()});
    }
    return rows;
}

}  // namespace

ojson to_json(const ResultRecord& record) {
    ojson j;
    j["schema_version"] = record.schema_version;
    j["command"] = to_string(record.command);
    j["timestamp"] = record.timestamp;
    j["config"] = record.config;
    j["grid_levels"] = record.grid_levels;
    j["payload"] = std::visit([](const auto& p) { return payload_json(p); }, record.payload);
    return j;
}

ResultRecord record_from_json(const ojson& j) {
    try {
        ResultRecord record;
        record.schema_version = j.at("schema_version").get<std::string>();
        if (record.schema_version != kSchemaVersion) {
            throw InvalidArgument("unsupported schema version '" + record.schema_version + "'");
        }
        record.command = parse_command(j.at("command").get<std::string>());
        record.timestamp = j.at("timestamp").get<std::string>();
        record.config = j.at("config");
        record.grid_levels = j.at("grid_levels").get<std::vector<std::size_t>>();
        const ojson& payload = j.at("payload");
        switch (record.command) {
            case Command::solve: record.payload = solve_from(payload); break;
            case Command::sweep_delta: record.payload = sweeps_from(payload); break;
            case Command::sweep_resolvent: record.payload = resolvent_rows_from(payload); break;
            case Command::eigs: record.payload = spectra_from(payload); break;
            case Command::verify: record.payload = suites_from(payload); break;
        }
        return record;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed result record: ") + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

// ---- CSV -----------------------------------------------------------------

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << "\r\n";
    }
    CsvWriter& field(const std::string& text) {
        if (!row_start_) out_ << ',';
        out_ << csv_field(text);
        row_start_ = false;
        return *this;
    }
    CsvWriter& number(double v) { return field(format_number(v)); }
    CsvWriter& integer(long long v) { return field(std::to_string(v)); }
    CsvWriter& flag(bool v) { return field(v ? "true" : "false"); }
    CsvWriter& empty() { return field(""); }
    void end_row() {
        out_ << "\r\n";
        row_start_ = true;
    }
    [[nodiscard]] std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    bool row_start_ = true;
};

}  // namespace

std::string delta_sweep_csv(const std::vector<SweepResult>& rows) {
    CsvWriter csv{"R", "max_k2_norm_sq", "max_dnorm_sq", "argmax_k", "argmax_xi", "points", "failures",
                  "argmax_dnorm_k", "argmax_dnorm_xi", "lattice_max_k2_norm_sq", "lattice_max_dnorm_sq"};
    for (const auto& r : rows) {
        csv.number(r.reynolds);
        if (r.skipped) {
            csv.empty().empty().empty().empty().integer(0).integer(0).empty().empty().empty().empty();
        } else {
            csv.number(r.max_k2_norm_sq)
                .number(r.max_dnorm_sq)
                .integer(r.argmax_k2.k)
                .number(r.argmax_k2.xi)
                .integer(static_cast<long long>(r.points_evaluated))
                .integer(static_cast<long long>(r.failures.size()))
                .integer(r.argmax_dnorm.k)
                .number(r.argmax_dnorm.xi)
                .number(r.lattice_max_k2_norm_sq)
                .number(r.lattice_max_dnorm_sq);
        }
        csv.end_row();
    }
    return csv.str();
}

std::string resolvent_sweep_csv(const std::vector<ResolventSweepRow>& rows) {
    CsvWriter csv{"R",        "sup_norm", "lattice_sup", "argmax_k", "argmax_xi", "k_max", "points", "failures",
                  "theorem_region_sup", "theorem_region_max_ratio", "theorem_region_ok", "truncation_warning"};
    for (const auto& r : rows) {
        csv.number(r.reynolds)
            .number(r.sup_norm)
            .number(r.lattice_sup)
            .integer(r.argmax_k)
            .number(r.argmax_xi)
            .integer(r.k_max)
            .integer(static_cast<long long>(r.points_evaluated))
            .integer(static_cast<long long>(r.failures.size()))
            .number(r.theorem_region_sup)
            .number(r.theorem_region_max_ratio)
            .flag(r.theorem_region_ok)
            .flag(r.truncation_warning);
        csv.end_row();
    }
    return csv.str();
}

std::string spectrum_csv(const std::vector<SpectrumReport>& rows) {
    CsvWriter csv{"k",     "R",    "n_nodes", "re_lambda", "im_lambda", "all_eigs_stable", "refinement_shift",
                  "kept", "discarded"};
    for (const auto& r : rows) {
        csv.integer(r.k)
            .number(r.reynolds)
            .integer(static_cast<long long>(r.n_nodes))
            .number(r.rightmost_eig.real())
            .number(r.rightmost_eig.imag())
            .flag(r.all_eigs_stable);
        if (r.refinement_shift) {
            csv.number(*r.refinement_shift);
        } else {
            csv.empty();
        }
        csv.integer(static_cast<long long>(r.eigenvalues_kept)).integer(static_cast<long long>(r.eigenvalues_discarded));
        csv.end_row();
    }
    return csv.str();
}

std::string solve_csv(const SolvePayload& p) {
    CsvWriter csv{"k",           "re_s",         "im_s",         "R",           "forcing",    "norm_sq",
                  "dnorm_sq",    "d2norm_sq",    "forcing_norm_sq", "residual_max", "converged_nodes",
                  "exact_error", "k0_bound_holds"};
    csv.integer(p.params.k)
        .number(p.params.s.real())
        .number(p.params.s.imag())
        .number(p.params.reynolds)
        .field(p.forcing)
        .number(p.norms.norm_sq)
        .number(p.norms.dnorm_sq)
        .number(p.norms.d2norm_sq)
        .number(p.forcing_norm_sq)
        .number(p.residual_max)
        .integer(static_cast<long long>(p.converged_nodes));
    if (p.exact_error) {
        csv.number(*p.exact_error);
    } else {
        csv.empty();
    }
    if (p.k0_bound_holds) {
        csv.flag(*p.k0_bound_holds);
    } else {
        csv.empty();
    }
    csv.end_row();
    return csv.str();
}

std::string profile_csv(const BvpSolution& solution) {
    CsvWriter csv{"y", "re_psi", "im_psi", "re_dpsi", "im_dpsi", "re_d2psi", "im_d2psi"};
    const RealVector& y = solution.psi.grid()->nodes();
    for (std::size_t i = 0; i < solution.psi.size(); ++i) {
        csv.number(y[static_cast<Eigen::Index>(i)])
            .number(solution.psi[i].real())
            .number(solution.psi[i].imag())
            .number(solution.psi_d1[i].real())
            .number(solution.psi_d1[i].imag())
            .number(solution.psi_d2[i].real())
            .number(solution.psi_d2[i].imag());
        csv.end_row();
    }
    return csv.str();
}

std::string verify_csv(const std::vector<SuiteResult>& rows) {
    CsvWriter csv{"suite", "passed", "measured", "threshold", "seconds", "detail"};
    for (const auto& r : rows) {
        csv.field(r.name).flag(r.passed).number(r.measured).number(r.threshold).number(r.seconds).field(r.detail);
        csv.end_row();
    }
    return csv.str();
}

// ---- SVG -----------------------------------------------------------------

namespace {

std::string xml_escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 2) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    constexpr double width = 640, height = 420;
    constexpr double left = 78, right = 24, top = 44, bottom = 58;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const auto xmap = [&](double x) { return spec.log_x ? std::log10(x) : x; };
    double x_lo = 0, x_hi = 1, y_hi = 0;
    bool have = false;
    for (const auto& s : spec.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.log_x && !(s.x[i] > 0)) continue;
            const double x = xmap(s.x[i]);
            x_lo = have ? std::min(x_lo, x) : x;
            x_hi = have ? std::max(x_hi, x) : x;
            y_hi = std::max(y_hi, s.y[i]);
            have = true;
        }
    }
    if (spec.reference_y) y_hi = std::max(y_hi, *spec.reference_y);
    if (!(x_hi > x_lo)) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    y_hi = y_hi > 0 ? y_hi * 1.1 : 1.0;
    const auto px = [&](double x) { return left + (xmap(x) - x_lo) / (x_hi - x_lo) * plot_w; };
    const auto py = [&](double y) { return top + plot_h - y / y_hi * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fixed(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(spec.title) << "</text>\n";
    svg << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(plot_w) << "\" height=\""
        << fixed(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // x ticks: decades on a log axis, five even steps otherwise
    std::vector<double> x_ticks;
    if (spec.log_x) {
        for (double e = std::ceil(x_lo - 1e-9); e <= x_hi + 1e-9; e += 1.0) x_ticks.push_back(std::pow(10.0, e));
    } else {
        for (int i = 0; i <= 5; ++i) x_ticks.push_back(x_lo + (x_hi - x_lo) * i / 5.0);
    }
    for (const double t : x_ticks) {
        const double x = px(t);
        svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(x) << "\" y2=\""
            << fixed(top + plot_h + 5) << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(top + plot_h + 19) << "\" text-anchor=\"middle\">"
            << tick_label(t) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = y_hi * i / 5.0;
        const double y = py(v);
        svg << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(left + plot_w)
            << "\" y2=\"" << fixed(y) << "\" stroke=\"" << (i == 0 ? "#444" : "#ddd") << "\"/>\n";
        svg << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">"
            << tick_label(v) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 14)
        << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
    svg << "<text transform=\"translate(18 " << fixed(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << xml_escape(spec.y_label) << "</text>\n";

    if (spec.reference_y) {
        const double y = py(*spec.reference_y);
        svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(left + plot_w)
            << "\" y2=\"" << fixed(y) << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
    }

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.log_x && !(s.x[i] > 0)) continue;
            if (!points.empty()) points += ' ';
            points += fixed(px(s.x[i])) + "," + fixed(py(s.y[i]));
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.log_x && !(s.x[i] > 0)) continue;
            svg << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i])) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        }
        const double ly = top + 16 + 16.0 * static_cast<double>(si);
        svg << "<line x1=\"" << fixed(left + 12) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\"" << fixed(left + 32)
            << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fixed(left + 38) << "\" y=\"" << fixed(ly) << "\">" << xml_escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

PlotSpec delta_plot(const std::vector<SweepResult>& rows, SweepTarget target, const std::string& norm) {
    if (norm != "k2" && norm != "dnorm") throw InvalidArgument("delta plot norm must be k2 or dnorm");
    const std::string name = target == SweepTarget::delta1 ? "delta_1" : "delta_2";
    PlotSpec spec;
    spec.title = norm == "k2" ? "max over (k, xi) of k^2 ||" + name + "||^2"
                              : "max over (k, xi) of ||" + name + "'||^2";
    spec.x_label = "R";
    spec.y_label = norm == "k2" ? "k^2 ||" + name + "||^2" : "||" + name + "'||^2";
    spec.reference_y = 1.0;
    PlotSeries series{name, {}, {}};
    for (const auto& r : rows) {
        if (r.skipped) continue;
        series.x.push_back(r.reynolds);
        series.y.push_back(norm == "k2" ? r.max_k2_norm_sq : r.max_dnorm_sq);
    }
    spec.series.push_back(std::move(series));
    return spec;
}

PlotSpec resolvent_plot(const std::vector<ResolventSweepRow>& rows) {
    PlotSpec spec;
    spec.title = "sup over i xi of the resolvent norm";
    spec.x_label = "R";
    spec.y_label = "resolvent norm";
    PlotSeries sup{"sup norm", {}, {}};
    PlotSeries region{"|s| >= 2 sqrt 2 (1 + sqrt R)", {}, {}};
    for (const auto& r : rows) {
        sup.x.push_back(r.reynolds);
        sup.y.push_back(r.sup_norm);
        region.x.push_back(r.reynolds);
        region.y.push_back(r.theorem_region_sup);
    }
    spec.series.push_back(std::move(sup));
    spec.series.push_back(std::move(region));
    return spec;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    static std::mutex writer;
    const std::lock_guard lock(writer);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

}  // namespace couette
