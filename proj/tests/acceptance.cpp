// Acceptance gate: runs each criterion at its stated tolerance and runtime
// budget, prints one PASS/FAIL line per criterion, and exits nonzero if any
// criterion fails. Reference values (manufactured forcings, analytic bounds,
// random forcings, fits) are computed here, not taken from the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "couette/bvp_solver.hpp"
#include "couette/errors.hpp"
#include "couette/resolvent.hpp"
#include "couette/sweep.hpp"
#include "oracles.hpp"

using namespace couette;

namespace {

constexpr double kPi = std::numbers::pi;

struct Measurement {
    double measured = 0.0;
    double threshold = 0.0;
    bool strict = false;     // measured < threshold rather than <=
    bool extra_ok = true;    // side conditions of the criterion
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Measurement()> run;
};

double bound_sq(cplx s, double r) { return 8.0 * (1.0 + std::sqrt(r)) * (1.0 + std::sqrt(r)) / std::norm(s); }
double circle_radius(double r) { return 2.0 * std::sqrt(2.0) * (1.0 + std::sqrt(r)); }
int mode_cutoff(double r) { return static_cast<int>(std::ceil(std::sqrt(r / std::sqrt(2.0)))) + 5; }
int admissible_k(double r) { return static_cast<int>(std::floor(std::sqrt(r / std::sqrt(2.0)))); }

double rel_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

// Twelve s on and beyond the circle |s| = 2 sqrt 2 (1 + sqrt R), Re s >= 0.
std::vector<cplx> region_samples(double r) {
    std::vector<cplx> out;
    for (const double factor : {1.0, 1.5, 3.0}) {
        for (const double angle : {-0.5, -1.0 / 6.0, 1.0 / 6.0, 0.5}) {
            const cplx s = std::polar(factor * circle_radius(r), angle * kPi);
            out.emplace_back(std::max(0.0, s.real()), s.imag());
        }
    }
    return out;
}

double region_ratio(double r, std::size_t n_nodes) {
    double worst = 0.0;
    for (const cplx s : region_samples(r)) {
        const double g = global_norm({s, r, mode_cutoff(r), n_nodes}).norm;
        worst = std::max(worst, g * g / bound_sq(s, r));
    }
    return worst;
}

Measurement manufactured_solution() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GridPtr grid = build_grid(64);
    const oracle::Poly p = oracle::quartic_complex();
    const GridFunction exact = GridFunction::sample(grid, p);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double r = std::pow(10.0, 4.0 * u(rng));
        const int k = static_cast<int>(std::floor(u(rng) * 61.0)) - 30;
        const double xi = (2.0 * u(rng) - 1.0) * 2.0 * (1.0 + std::sqrt(r));
        const ModeParams params{k, {0.0, xi}, r};
        const GridFunction forcing = GridFunction::sample(grid, oracle::mode_operator_image(p, k, params.s, r));
        const BvpSolution sol = solve_clamped(assemble_operators(params, grid), forcing);
        worst = std::max(worst, (sol.psi - exact).max_abs() / exact.max_abs());
    }
    return {worst, 1e-8, true, true, "max relative error over 20 tuples at n = 64"};
}

Measurement decomposition_identity() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GridPtr grid = build_grid(96);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double r = 10.0 * std::pow(200.0, u(rng));
        const int k = 1 + static_cast<int>(std::floor(u(rng) * std::max(1, admissible_k(r))));
        const double xi = (2.0 * u(rng) - 1.0) * 2.0 * (1.0 + std::sqrt(r));
        const auto profile = oracle::random_profile(rng, false);
        const GridFunction chi = GridFunction::sample(grid, [&](double y) { return y * (1.0 - y) * profile(y); });
        const GridFunction forcing = build_scalar_forcing(divergence_free_forcing(chi, k), k);
        const OperatorSet ops = assemble_operators({k, {0.0, xi}, r}, grid);
        const BvpSolution direct = solve_clamped(ops, forcing);
        const Decomposition dec = decompose(ops, forcing);
        const GridFunction rebuilt = dec.g - (dec.alpha * solve_homogeneous_bc(ops, BoundaryData::delta1()).psi +
                                              dec.beta * solve_homogeneous_bc(ops, BoundaryData::delta2()).psi);
        worst = std::max(worst, std::sqrt(l2_norm_sq(direct.psi - rebuilt) / l2_norm_sq(direct.psi)));
        worst = std::max(worst, std::sqrt(l2_norm_sq(direct.psi - dec.psi_reconstructed) / l2_norm_sq(direct.psi)));
    }
    return {worst, 1e-6, true, true, "max relative L2 gap over 50 divergence-free forcings"};
}

Measurement theorem1_region() {
    std::ostringstream detail;
    double worst = 0.0;
    for (const double r : {10.0, 100.0, 1000.0}) {
        const double ratio = region_ratio(r, 96);
        detail << "R=" << r << ":" << ratio << " ";
        worst = std::max(worst, ratio);
    }
    detail << "(max gain^2 / bound, 12 samples per R, k_max = ceil(sqrt(R/sqrt 2)) + 5)";
    return {worst, 1.05, false, true, detail.str()};
}

Measurement delta_envelope() {
    SweepSpec spec;
    spec.reynolds_list = {1.0, 10.0, 100.0, 1000.0};
    std::ostringstream detail;
    double worst = 0.0;
    bool evaluated = true;
    for (const SweepTarget target : {SweepTarget::delta1, SweepTarget::delta2}) {
        detail << to_string(target) << ":";
        for (const SweepResult& row : run_delta_sweep(spec, target)) {
            if (row.skipped) {
                detail << " R=" << row.reynolds << " no admissible k;";
                // R = 1 has no wavenumber with 1 <= k <= sqrt(R / sqrt 2)
                evaluated = evaluated && admissible_k(row.reynolds) < 1;
                continue;
            }
            detail << " R=" << row.reynolds << " " << row.max_k2_norm_sq << "/" << row.max_dnorm_sq << ";";
            worst = std::max({worst, row.max_k2_norm_sq, row.max_dnorm_sq});
        }
        detail << " ";
    }
    return {worst, 1.05, false, evaluated, detail.str()};
}

Measurement large_k() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double r = std::pow(10.0, 3.0 * u(rng));
        const int magnitude = admissible_k(r) + 1 + static_cast<int>(u(rng) * 10.0);
        const int k = u(rng) < 0.5 ? -magnitude : magnitude;
        const cplx s = std::polar(3.0 * circle_radius(r) * u(rng), (u(rng) - 0.5) * kPi);
        const ModeParams params{k, {std::max(0.0, s.real()), s.imag()}, r};
        const auto f = oracle::random_profile(rng, false);
        const auto g = oracle::random_profile(rng, false);
        const cplx ik{0.0, static_cast<double>(k)};

        const ProblemSpec first{params, [&](const GridPtr& grid) { return differentiate(GridFunction::sample(grid, f), 1); },
                                {}, {}};
        const ProblemSpec second{params, [&](const GridPtr& grid) { return ik * GridFunction::sample(grid, g); }, {}, {}};
        const RefinedSolution p1 = refine_until_converged(first, 1e-8);
        const RefinedSolution p2 = refine_until_converged(second, 1e-8);
        const double f_sq = l2_norm_sq(GridFunction::sample(p1.solution.psi.grid(), f));
        const double g_sq = l2_norm_sq(GridFunction::sample(p2.solution.psi.grid(), g));
        const NormTriple& a = p1.solution.norms;
        const NormTriple& b = p2.solution.norms;
        const double kk = std::abs(k), r2 = r * r;
        for (const double ratio : {std::pow(kk, 4) * a.dnorm_sq / (r2 * f_sq), std::pow(kk, 6) * a.norm_sq / (2 * r2 * f_sq),
                                   kk * kk * a.d2norm_sq / (r2 * f_sq), std::pow(kk, 6) * b.norm_sq / (4 * r2 * g_sq),
                                   std::pow(kk, 4) * b.dnorm_sq / (2 * r2 * g_sq), kk * kk * b.d2norm_sq / (2 * r2 * g_sq)}) {
            worst = std::max(worst, ratio);
        }
    }
    return {worst, 1.01, false, true, "largest lhs / rhs over six inequalities and 20 samples"};
}

Measurement k0_estimate() {
    const std::vector<std::pair<std::string, std::function<double(double)>>> profiles{
        {"sin", [](double y) { return std::sin(kPi * y); }},
        {"sin2", [](double y) { return std::sin(2.0 * kPi * y); }},
        {"cos", [](double y) { return std::cos(kPi * y); }},
        {"poly", [](double y) { return 1.0 - 3.0 * y + y * y * y; }},
        {"exp", [](double y) { return std::exp(2.0 * y); }},
    };
    double worst = 0.0;
    for (const double r : {10.0, 100.0, 1000.0}) {
        for (const double xi : {0.0, 1.0, -5.0}) {
            for (const auto& [name, f] : profiles) {
                const auto sample = [&](const GridPtr& grid) {
                    return GridFunction::sample(grid, [&](double y) { return cplx{f(y), 0.0}; });
                };
                const ProblemSpec problem{{0, {0.0, xi}, r}, [&](const GridPtr& grid) { return differentiate(sample(grid), 1); },
                                          {}, {}};
                const RefinedSolution sol = refine_until_converged(problem, 1e-8);
                const double f_sq = l2_norm_sq(sample(sol.solution.psi.grid()));
                worst = std::max(worst, sol.solution.norms.norm_sq / (r * r / std::pow(kPi, 6) * f_sq));
            }
        }
    }
    return {worst, 1.0, false, true, "max ||psi||^2 / (R^2 / pi^6 ||F||^2) over 3 R, 3 xi, 5 profiles"};
}

Measurement resolvent_scaling() {
    SweepSpec spec;
    spec.reynolds_list = {100.0, 200.0, 400.0, 800.0};
    std::vector<double> sups;
    std::ostringstream detail;
    for (const ResolventSweepRow& row : run_resolvent_sweep(spec)) {
        sups.push_back(row.sup_norm);
        detail << "R=" << row.reynolds << ":" << row.sup_norm << " ";
    }
    const double slope = loglog_slope(spec.reynolds_list, sups);
    detail << "slope " << slope << " (criterion: slope in [0.8, 1.2])";
    return {std::abs(slope - 1.0), 0.2, false, true, detail.str()};
}

Measurement spectral_gap() {
    std::vector<double> products;
    bool stable = true;
    std::ostringstream detail;
    detail << "|Re lambda| R:";
    for (const double r : {250.0, 500.0, 1000.0, 2000.0}) {
        const SpectrumReport rep = rightmost_eigenvalue(1, r, build_grid(128));
        stable = stable && rep.rightmost_eig.real() < 0.0;
        products.push_back(std::abs(rep.rightmost_eig.real()) * r);
        detail << " " << products.back();
    }
    double mean = 0.0;
    for (const double p : products) mean += p / static_cast<double>(products.size());
    double spread = 0.0;
    for (const double p : products) spread = std::max(spread, std::abs(p - mean) / mean);
    detail << "; max deviation from mean " << spread << "; Re lambda < 0 for all R: " << (stable ? "yes" : "no");
    return {spread, 0.25, true, stable, detail.str()};
}

Measurement mesh_robustness() {
    const double r = 100.0;
    std::ostringstream detail;
    const double c3 = rel_change(region_ratio(r, 64), region_ratio(r, 128));

    SweepSpec coarse;
    coarse.reynolds_list = {r};
    SweepSpec fine = coarse;
    fine.xi_points_per_r *= 2;
    fine.levels.clear();
    for (const std::size_t n : coarse.levels) fine.levels.push_back(2 * n);
    double c4 = 0.0;
    for (const SweepTarget target : {SweepTarget::delta1, SweepTarget::delta2}) {
        const SweepResult a = run_delta_sweep(coarse, target).front();
        const SweepResult b = run_delta_sweep(fine, target).front();
        c4 = std::max({c4, rel_change(a.max_k2_norm_sq, b.max_k2_norm_sq), rel_change(a.max_dnorm_sq, b.max_dnorm_sq)});
    }

    ResolventSweepOptions fine_opts;
    fine_opts.n_nodes = 128;
    const double c7 = rel_change(run_resolvent_sweep(coarse).front().sup_norm,
                                 run_resolvent_sweep(fine, fine_opts).front().sup_norm);
    detail << "R = 100 relative changes: region max " << c3 << ", delta maxima " << c4 << ", resolvent sup " << c7;
    return {std::max({c3, c4, c7}), 0.01, true, true, detail.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "manufactured solution", 10.0, manufactured_solution},
        {2, "decomposition identity", 60.0, decomposition_identity},
        {3, "analytic-bound region", 300.0, theorem1_region},
        {4, "delta envelope", 900.0, delta_envelope},
        {5, "large-|k| estimates", 30.0, large_k},
        {6, "k = 0 estimate", 10.0, k0_estimate},
        {7, "resolvent proportional to R", 600.0, resolvent_scaling},
        {8, "spectral gap proportional to 1/R", 120.0, spectral_gap},
        {9, "mesh robustness", 600.0, mesh_robustness},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Measurement m;
        std::string error;
        try {
            m = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool within = m.strict ? m.measured < m.threshold : m.measured <= m.threshold;
        const bool passed = error.empty() && within && m.extra_ok && seconds < c.budget_seconds;
        if (!passed) ++failed;
        if (error.empty()) {
            std::printf("%s [%d] %s: measured %.6g, threshold %s %.6g, %.1f s of %.0f s | %s\n", passed ? "PASS" : "FAIL",
                        c.id, c.name.c_str(), m.measured, m.strict ? "<" : "<=", m.threshold, seconds, c.budget_seconds,
                        m.detail.c_str());
        } else {
            std::printf("FAIL [%d] %s: error after %.1f s: %s\n", c.id, c.name.c_str(), seconds, error.c_str());
        }
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
