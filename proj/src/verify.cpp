#include "couette/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "couette/bvp_solver.hpp"
#include "couette/errors.hpp"
#include "couette/forcing.hpp"
#include "couette/resolvent.hpp"
#include "couette/sweep.hpp"

namespace couette {

namespace {

constexpr double kPi = std::numbers::pi;

struct Context {
    const VerifyOptions& options;
    std::mt19937_64& rng;

    [[nodiscard]] bool full() const { return options.scale == VerifyScale::full; }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    cplx gaussian() {
        std::normal_distribution<double> n;
        return {n(rng), n(rng)};
    }
};

struct Outcome {
    double measured = 0.0;
    double threshold = 0.0;
    bool strict = false;
    bool extra_ok = true;
    std::string detail;
};

// Smooth random profile: a few sine and cosine modes with complex weights.
std::function<cplx(double)> random_profile(Context& ctx, bool vanish_at_walls) {
    std::vector<cplx> a(4), b(4);
    for (auto& c : a) c = ctx.gaussian();
    for (auto& c : b) c = vanish_at_walls ? cplx{} : ctx.gaussian();
    return [a, b](double y) {
        cplx v{0.0, 0.0};
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double m = static_cast<double>(j + 1);
            v += a[j] * std::sin(m * kPi * y) + b[j] * std::cos(m * kPi * y);
        }
        return v;
    };
}

Outcome manufactured_solution(Context& ctx) {
    const GridPtr grid = build_grid(64);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double r = std::pow(10.0, ctx.uniform(0.0, 4.0));
        const double half = 2.0 * (1.0 + std::sqrt(r));
        const ModeParams params{ctx.integer(-30, 30), {0.0, ctx.uniform(-half, half)}, r};
        const ForcingCase fc = make_preset_forcing("mms-complex", params, grid);
        const BvpSolution sol = solve_clamped(assemble_operators(params, grid), fc.scalar);
        worst = std::max(worst, (sol.psi - *fc.exact).max_abs() / fc.exact->max_abs());
    }
    return {worst, 1e-8, true, true, "20 random (k, xi, R), n = 64, max relative error"};
}

Outcome decomposition_identity(Context& ctx) {
    const int trials = ctx.full() ? 50 : 20;
    const GridPtr grid = build_grid(96);
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const double r = std::pow(10.0, ctx.uniform(1.0, std::log10(2000.0)));
        const int k = ctx.integer(1, std::max(1, max_wavenumber(r)));
        const double half = 2.0 * (1.0 + std::sqrt(r));
        const ModeParams params{k, {0.0, ctx.uniform(-half, half)}, r};
        const auto profile = random_profile(ctx, true);
        const GridFunction chi = GridFunction::sample(grid, [&](double y) { return y * (1.0 - y) * profile(y); });
        const GridFunction forcing = build_scalar_forcing(divergence_free_forcing(chi, k), k);
        const OperatorSet ops = assemble_operators(params, grid);
        const BvpSolution direct = solve_clamped(ops, forcing);
        const Decomposition dec = decompose(ops, forcing);
        const double rel =
            std::sqrt(l2_norm_sq(direct.psi - dec.psi_reconstructed) / l2_norm_sq(direct.psi));
        worst = std::max(worst, rel);
    }
    return {worst, 1e-6, true, true, std::to_string(trials) + " random divergence-free forcings"};
}

Outcome theorem1_region(Context& ctx) {
    std::vector<double> rs{10.0, 100.0};
    if (ctx.full()) rs.push_back(1000.0);
    double worst = 0.0;
    for (const double r : rs) {
        for (const double factor : {1.0, 1.5, 3.0}) {
            for (const double angle : {-0.5, -1.0 / 6.0, 1.0 / 6.0, 0.5}) {
                cplx s = std::polar(factor * theorem1_radius(r), angle * kPi);
                s.real(std::max(0.0, s.real()));
                const GlobalNormReport report = global_norm({s, r, default_k_max(r), 96});
                worst = std::max(worst, report.norm * report.norm / *theorem1_bound(s, r));
            }
        }
    }
    return {worst, 1.05, false, true, "max gain^2 / (8 (1 + sqrt R)^2 / |s|^2) over 12 s per R"};
}

Outcome delta_envelope(Context& ctx) {
    SweepSpec spec;
    spec.reynolds_list = {1.0, 10.0, 100.0};
    if (ctx.full()) spec.reynolds_list.push_back(1000.0);
    double worst = 0.0;
    for (const SweepTarget target : {SweepTarget::delta1, SweepTarget::delta2}) {
        for (const SweepResult& row : run_delta_sweep(spec, target)) {
            worst = std::max({worst, row.max_k2_norm_sq, row.max_dnorm_sq});
        }
    }
    return {worst, 1.05, false, true, "max of k^2 ||delta_j||^2 and ||delta_j'||^2"};
}

Outcome large_k(Context& ctx) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double r = std::pow(10.0, ctx.uniform(0.0, 3.0));
        const int k = (ctx.integer(0, 1) ? 1 : -1) * (max_wavenumber(r) + ctx.integer(1, 12));
        const cplx s = std::polar(ctx.uniform(0.0, 3.0 * theorem1_radius(r)), ctx.uniform(-0.5, 0.5) * kPi);
        const ModeParams params{k, {std::max(0.0, s.real()), s.imag()}, r};
        const auto f = random_profile(ctx, false);
        const auto g = random_profile(ctx, false);
        const double kk = std::abs(k);
        const double r2 = r * r;
        const cplx ik{0.0, static_cast<double>(k)};

        ProblemSpec first{params, [&](const GridPtr& grid) { return differentiate(GridFunction::sample(grid, f), 1); },
                          {}, {}};
        ProblemSpec second{params, [&](const GridPtr& grid) { return ik * GridFunction::sample(grid, g); }, {}, {}};
        const RefinedSolution p1 = refine_until_converged(first);
        const RefinedSolution p2 = refine_until_converged(second);
        const double f_sq = l2_norm_sq(GridFunction::sample(p1.solution.psi.grid(), f));
        const double g_sq = l2_norm_sq(GridFunction::sample(p2.solution.psi.grid(), g));
        const NormTriple& a = p1.solution.norms;
        const NormTriple& b = p2.solution.norms;
        const double ratios[] = {
            std::pow(kk, 4) * a.dnorm_sq / (r2 * f_sq),        std::pow(kk, 6) * a.norm_sq / (2.0 * r2 * f_sq),
            kk * kk * a.d2norm_sq / (r2 * f_sq),               std::pow(kk, 6) * b.norm_sq / (4.0 * r2 * g_sq),
            std::pow(kk, 4) * b.dnorm_sq / (2.0 * r2 * g_sq),  kk * kk * b.d2norm_sq / (2.0 * r2 * g_sq),
        };
        for (const double ratio : ratios) worst = std::max(worst, ratio);
    }
    return {worst, 1.01, false, true, "largest lhs / rhs over six inequalities, 20 samples with |k| > sqrt(R / sqrt 2)"};
}

Outcome k0_estimate(Context&) {
    double worst = 0.0;
    for (const double r : {10.0, 100.0, 1000.0}) {
        for (const double xi : {0.0, 1.0, -5.0}) {
            for (const std::string& name : k0_forcing_presets()) {
                const ModeParams params{0, {0.0, xi}, r};
                ProblemSpec problem{
                    params, [&](const GridPtr& grid) { return make_preset_forcing(name, params, grid).scalar; }, {}, {}};
                const RefinedSolution sol = refine_until_converged(problem);
                const ForcingCase fc = make_preset_forcing(name, params, sol.solution.psi.grid());
                const double f_sq = l2_norm_sq(fc.forcing->f_hat);
                const double bound = r * r / std::pow(kPi, 6) * f_sq;
                worst = std::max(worst, sol.solution.norms.norm_sq / bound);
            }
        }
    }
    return {worst, 1.0, false, true, "max ||psi||^2 / (R^2 / pi^6 ||F||^2), 3 R x 3 xi x 5 presets"};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome resolvent_scaling(Context&) {
    SweepSpec spec;
    spec.reynolds_list = {100.0, 200.0, 400.0, 800.0};
    std::vector<double> sups;
    std::ostringstream detail;
    detail << "sup over i xi:";
    for (const ResolventSweepRow& row : run_resolvent_sweep(spec)) {
        sups.push_back(row.sup_norm);
        detail << " R=" << row.reynolds << ":" << row.sup_norm;
    }
    const double slope = loglog_slope(spec.reynolds_list, sups);
    detail << "; slope " << slope;
    return {std::abs(slope - 1.0), 0.2, false, true, detail.str()};
}

Outcome spectral_gap(Context&) {
    const std::vector<double> rs{250.0, 500.0, 1000.0, 2000.0};
    std::vector<double> products;
    bool stable = true;
    std::ostringstream detail;
    detail << "|Re lambda| R:";
    for (const double r : rs) {
        const SpectrumReport rep = rightmost_eigenvalue(1, r, build_grid(128));
        stable = stable && rep.all_eigs_stable;
        products.push_back(std::abs(rep.rightmost_eig.real()) * r);
        detail << " " << products.back();
    }
    double mean = 0.0;
    for (const double p : products) mean += p / static_cast<double>(products.size());
    double spread = 0.0;
    for (const double p : products) spread = std::max(spread, std::abs(p - mean) / mean);
    detail << "; all Re lambda < 0: " << (stable ? "yes" : "no");
    return {spread, 0.25, true, stable, detail.str()};
}

double rel_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Outcome mesh_robustness(Context&) {
    const double r = 100.0;
    std::ostringstream detail;
    // analytic-bound region: global norm on the threshold circle
    const cplx s{0.0, theorem1_radius(r)};
    const double t1 = rel_change(global_norm({s, r, default_k_max(r), 64}).norm,
                                 global_norm({s, r, default_k_max(r), 128}).norm);

    SweepSpec coarse;
    coarse.reynolds_list = {r};
    SweepSpec fine = coarse;
    fine.xi_points_per_r *= 2;
    fine.levels = {128, 192, 256, 384, 512};
    const SweepResult dc = run_delta_sweep(coarse, SweepTarget::delta1).front();
    const SweepResult df = run_delta_sweep(fine, SweepTarget::delta1).front();
    const double d = std::max(rel_change(dc.max_k2_norm_sq, df.max_k2_norm_sq),
                              rel_change(dc.max_dnorm_sq, df.max_dnorm_sq));

    ResolventSweepOptions fine_opts;
    fine_opts.n_nodes = 128;
    const double rc = run_resolvent_sweep(coarse).front().sup_norm;
    const double rf = run_resolvent_sweep(fine, fine_opts).front().sup_norm;
    const double res = rel_change(rc, rf);
    detail << "R = 100 relative changes: bound region " << t1 << ", delta1 " << d << ", resolvent sup " << res;
    return {std::max({t1, d, res}), 0.01, true, true, detail.str()};
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

using Suite = Outcome (*)(Context&);

const std::vector<std::pair<std::string, Suite>>& registry() {
    static const std::vector<std::pair<std::string, Suite>> suites{
        {"manufactured-solution", manufactured_solution},
        {"decomposition-identity", decomposition_identity},
        {"theorem1-region", theorem1_region},
        {"delta-envelope", delta_envelope},
        {"large-k", large_k},
        {"k0-estimate", k0_estimate},
        {"resolvent-scaling", resolvent_scaling},
        {"spectral-gap", spectral_gap},
        {"mesh-robustness", mesh_robustness},
    };
    return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, suite] : registry()) names.push_back(name);
    return names;
}

std::vector<SuiteResult> run_verify(const VerifyOptions& options) {
    if (!(options.tolerance_scale >= 0.0)) throw InvalidArgument("tolerance scale must be non-negative");
    const std::vector<std::string> all = suite_names();
    for (const std::string& name : options.suites) {
        if (std::find(all.begin(), all.end(), name) == all.end()) {
            throw InvalidArgument("unknown verify suite '" + name + "'");
        }
    }

    std::vector<SuiteResult> results;
    for (const auto& [name, suite] : registry()) {
        if (!options.suites.empty() &&
            std::find(options.suites.begin(), options.suites.end(), name) == options.suites.end()) {
            continue;
        }
        // each suite draws from its own stream so selection does not change samples
        std::mt19937_64 rng(options.seed ^ fnv1a(name));
        Context ctx{options, rng};
        SuiteResult result;
        result.name = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            const Outcome outcome = suite(ctx);
            result.measured = outcome.measured;
            result.threshold = outcome.threshold * options.tolerance_scale;
            const bool within =
                outcome.strict ? result.measured < result.threshold : result.measured <= result.threshold;
            result.passed = within && outcome.extra_ok;
            result.detail = outcome.detail;
        } catch (const Error& e) {
            result.passed = false;
            result.detail = std::string("error: ") + e.what();
        }
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace couette
