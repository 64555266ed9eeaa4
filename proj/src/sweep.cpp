#include "couette/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "couette/errors.hpp"
#include "couette/parallel.hpp"
#include "couette/resolvent.hpp"

namespace couette {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt 5 - 1) / 2

// Golden-section search for a maximum of f on [lo, hi].
template <class F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

void check_failures(double reynolds, std::size_t failed, std::size_t total) {
    if (total > 0 && static_cast<double>(failed) > kMaxFailureFraction * static_cast<double>(total)) {
        throw SweepFailed("sweep at R = " + std::to_string(reynolds) + ": " + std::to_string(failed) + " of " +
                          std::to_string(total) + " points failed");
    }
}

}  // namespace

std::string to_string(SweepTarget target) {
    switch (target) {
        case SweepTarget::delta1: return "delta1";
        case SweepTarget::delta2: return "delta2";
        case SweepTarget::resolvent: return "resolvent";
    }
    return "unknown";
}

SweepTarget parse_sweep_target(const std::string& name) {
    if (name == "delta1") return SweepTarget::delta1;
    if (name == "delta2") return SweepTarget::delta2;
    if (name == "resolvent") return SweepTarget::resolvent;
    throw InvalidArgument("unknown sweep target '" + name + "' (expected delta1, delta2 or resolvent)");
}

void SweepSpec::validate() const {
    if (reynolds_list.empty()) throw InvalidArgument("sweep needs at least one Reynolds number");
    for (std::size_t i = 0; i < reynolds_list.size(); ++i) {
        if (!(reynolds_list[i] > 0.0) || !std::isfinite(reynolds_list[i])) {
            throw InvalidArgument("Reynolds numbers must be positive and finite");
        }
        if (i > 0 && !(reynolds_list[i] > reynolds_list[i - 1])) {
            throw InvalidArgument("Reynolds list must be strictly increasing");
        }
    }
    if (xi_points_per_r < 3) throw InvalidArgument("xi_points_per_r must be at least 3");
    if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
    if (levels.size() < 2) throw InvalidArgument("refinement needs at least two grid levels");
}

int max_wavenumber(double reynolds) {
    return static_cast<int>(std::floor(std::sqrt(reynolds / std::numbers::sqrt2)));
}

std::vector<double> uniform_lattice(double half_width, std::size_t count) {
    if (count < 2) throw InvalidArgument("a lattice needs at least two points");
    std::vector<double> xs(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        // integer numerator keeps the lattice exactly antisymmetric
        const double num = 2.0 * static_cast<double>(i) - denom;
        xs[i] = half_width * num / denom;
    }
    xs.front() = -half_width;
    xs.back() = half_width;
    return xs;
}

std::vector<double> mesh_for_reynolds(double reynolds, std::size_t base_points) {
    if (base_points < 3) throw InvalidArgument("base_points must be at least 3");
    const auto factor = static_cast<std::size_t>(std::ceil(1.0 + std::sqrt(reynolds) / 10.0));
    const std::size_t count = std::min(base_points * factor, kMaxLatticePoints);
    return uniform_lattice(2.0 * (1.0 + std::sqrt(reynolds)), count);
}

DeltaPointValue evaluate_delta_point(SweepTarget which, int k, double xi, double reynolds, double rel_tol,
                                     std::span<const std::size_t> levels) {
    if (which == SweepTarget::resolvent) throw InvalidArgument("evaluate_delta_point needs delta1 or delta2");
    ProblemSpec problem;
    problem.params = {k, {0.0, xi}, reynolds};
    problem.bc = which == SweepTarget::delta1 ? BoundaryData::delta1() : BoundaryData::delta2();
    const RefinedSolution refined = refine_until_converged(problem, rel_tol, levels);
    const double kd = k;
    return {kd * kd * refined.solution.norms.norm_sq, refined.solution.norms.dnorm_sq, refined.levels_used.back()};
}

namespace {

struct Sample {
    int k = 0;
    double xi = 0.0;
    DeltaPointValue value;
    bool ok = false;
    std::string error;
};

// Evaluates every (k, xi) pair concurrently, keeping input order.
std::vector<Sample> evaluate_samples(const std::vector<std::pair<int, double>>& points, SweepTarget which,
                                     double reynolds, const SweepSpec& spec) {
    std::vector<Sample> samples(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        Sample& sample = samples[i];
        sample.k = points[i].first;
        sample.xi = points[i].second;
        try {
            sample.value = evaluate_delta_point(which, sample.k, sample.xi, reynolds, spec.rel_tol, spec.levels);
            sample.ok = true;
        } catch (const Error& e) {
            sample.error = e.what();
        }
    });
    return samples;
}

using DeltaField = double DeltaPointValue::*;

// Golden-section refinement of one quantity around the best samples of the
// strongest few wavenumbers. Returns (k, xi, value) of the best refined point.
struct Refined {
    int k = 0;
    double xi = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

std::vector<Refined> refine_field(const std::vector<Sample>& samples, DeltaField field, SweepTarget which,
                                  double reynolds, double half_width, const SweepSpec& spec) {
    constexpr std::size_t kCandidates = 3;
    std::map<int, std::vector<const Sample*>> by_k;
    for (const Sample& sample : samples) {
        if (sample.ok) by_k[sample.k].push_back(&sample);
    }
    struct Seed {
        int k;
        double value, lo, hi, xi;
    };
    std::vector<Seed> seeds;
    for (auto& [k, list] : by_k) {
        std::sort(list.begin(), list.end(), [](const Sample* a, const Sample* b) { return a->xi < b->xi; });
        std::size_t best = 0;
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (list[i]->value.*field > list[best]->value.*field) best = i;
        }
        const double lo = best > 0 ? list[best - 1]->xi : -half_width;
        const double hi = best + 1 < list.size() ? list[best + 1]->xi : half_width;
        seeds.push_back({k, list[best]->value.*field, lo, hi, list[best]->xi});
    }
    std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.value > b.value; });
    if (seeds.size() > kCandidates) seeds.resize(kCandidates);

    std::vector<Refined> out(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        const Seed& seed = seeds[i];
        Refined& r = out[i];
        r = {seed.k, seed.xi, seed.value, 0};
        auto f = [&](double xi) {
            ++r.evaluations;
            try {
                return evaluate_delta_point(which, seed.k, xi, reynolds, spec.rel_tol, spec.levels).*field;
            } catch (const Error&) {
                return 0.0;
            }
        };
        const auto [xi_star, v_star] = golden_maximize(f, seed.lo, seed.hi, 1e-5 * (1.0 + std::abs(seed.xi)));
        if (v_star > r.value) {
            r.xi = xi_star;
            r.value = v_star;
        }
    });
    return out;
}

}  // namespace

std::vector<SweepResult> run_delta_sweep(const SweepSpec& spec, SweepTarget which) {
    spec.validate();
    if (which == SweepTarget::resolvent) throw InvalidArgument("run_delta_sweep needs delta1 or delta2");

    std::vector<SweepResult> results;
    results.reserve(spec.reynolds_list.size());
    for (const double reynolds : spec.reynolds_list) {
        SweepResult result;
        result.reynolds = reynolds;
        const int k_top = max_wavenumber(reynolds);
        if (k_top < 1) {
            result.skipped = true;
            results.push_back(std::move(result));
            continue;
        }
        const std::vector<double> lattice = mesh_for_reynolds(reynolds, spec.xi_points_per_r);
        const double half_width = lattice.back();

        std::vector<std::pair<int, double>> points;
        for (int k = 1; k <= k_top; ++k) {
            for (const double xi : lattice) points.emplace_back(k, xi);
        }
        const std::vector<Sample> samples = evaluate_samples(points, which, reynolds, spec);

        bool first = true;
        for (const Sample& sample : samples) {
            if (!sample.ok) {
                result.failures.push_back({sample.k, sample.xi, sample.error});
                continue;
            }
            ++result.points_evaluated;
            result.max_nodes_used = std::max(result.max_nodes_used, sample.value.nodes);
            if (first || sample.value.k2_norm_sq > result.max_k2_norm_sq) {
                result.max_k2_norm_sq = sample.value.k2_norm_sq;
                result.argmax_k2 = {sample.k, sample.xi};
            }
            if (first || sample.value.dnorm_sq > result.max_dnorm_sq) {
                result.max_dnorm_sq = sample.value.dnorm_sq;
                result.argmax_dnorm = {sample.k, sample.xi};
            }
            first = false;
        }
        check_failures(reynolds, result.failures.size(), points.size());
        result.lattice_max_k2_norm_sq = result.max_k2_norm_sq;
        result.lattice_max_dnorm_sq = result.max_dnorm_sq;

        if (spec.local_refine) {
            // Critical layers sit at xi = -k y, y in [0, 1].
            std::vector<std::pair<int, double>> band;
            for (int k = 1; k <= k_top; ++k) {
                const int count = std::max(8, 4 * k);
                for (int j = 1; j < count; ++j) {
                    const double xi = -static_cast<double>(k) * j / count;
                    if (xi >= -half_width) band.emplace_back(k, xi);
                }
            }
            std::vector<Sample> all = samples;
            for (Sample& sample : evaluate_samples(band, which, reynolds, spec)) {
                ++result.refine_evaluations;
                if (sample.ok) result.max_nodes_used = std::max(result.max_nodes_used, sample.value.nodes);
                all.push_back(std::move(sample));
            }
            const auto improve = [&](DeltaField field, double& best, LatticePoint& at) {
                for (const Refined& r : refine_field(all, field, which, reynolds, half_width, spec)) {
                    result.refine_evaluations += r.evaluations;
                    if (r.value > best) {
                        best = r.value;
                        at = {r.k, r.xi};
                    }
                }
            };
            improve(&DeltaPointValue::k2_norm_sq, result.max_k2_norm_sq, result.argmax_k2);
            improve(&DeltaPointValue::dnorm_sq, result.max_dnorm_sq, result.argmax_dnorm);
        }
        results.push_back(std::move(result));
    }
    return results;
}

std::vector<ResolventSweepRow> run_resolvent_sweep(const SweepSpec& spec, const ResolventSweepOptions& options) {
    spec.validate();
    std::vector<ResolventSweepRow> rows;
    rows.reserve(spec.reynolds_list.size());
    const GridPtr grid = build_grid(options.n_nodes);

    for (const double reynolds : spec.reynolds_list) {
        ResolventSweepRow row;
        row.reynolds = reynolds;
        row.k_max = options.k_max > 0 ? options.k_max : default_k_max(reynolds);
        const double radius = theorem1_radius(reynolds);

        std::vector<double> lattice = options.lattice;
        if (lattice.empty()) {
            const auto factor = static_cast<std::size_t>(std::ceil(1.0 + std::sqrt(reynolds) / 10.0));
            lattice = uniform_lattice(radius, std::min(spec.xi_points_per_r * factor, kMaxLatticePoints));
            if (options.include_zero) lattice.push_back(0.0);
        }
        // Mode k >= 0 at xi stands for mode -k at -xi as well.
        std::vector<double> scan = lattice;
        for (const double xi : lattice) scan.push_back(-xi);
        std::sort(scan.begin(), scan.end());
        scan.erase(std::unique(scan.begin(), scan.end()), scan.end());
        const auto in_lattice = [&](double xi) {
            return std::find(lattice.begin(), lattice.end(), xi) != lattice.end();
        };

        const auto modes = static_cast<std::size_t>(row.k_max + 1);
        struct ModeBest {
            double lattice_gain = -1.0;
            double gain = -1.0;
            double xi = 0.0;
            std::string error;
            std::size_t failed = 0;
            std::size_t evaluated = 0;
        };
        std::vector<ModeBest> best(modes);
        parallel_for(modes, [&](std::size_t m) {
            const int k = static_cast<int>(m);
            ModeBest& b = best[m];
            auto gain_at = [&](double xi) {
                ++b.evaluated;
                try {
                    return mode_gain({k, {0.0, xi}, reynolds}, grid).gain;
                } catch (const Error& e) {
                    ++b.failed;
                    if (b.error.empty()) b.error = e.what();
                    return 0.0;
                }
            };
            std::size_t best_index = 0;
            for (std::size_t i = 0; i < scan.size(); ++i) {
                const double g = gain_at(scan[i]);
                if (g > b.gain) {
                    b.gain = g;
                    b.xi = scan[i];
                    best_index = i;
                }
            }
            b.lattice_gain = b.gain;
            if (!spec.local_refine || scan.size() < 2) return;

            double lo = scan[best_index > 0 ? best_index - 1 : 0];
            double hi = scan[std::min(best_index + 1, scan.size() - 1)];
            // Critical layers sit at xi = -k y, y in [0, 1]; probe that band at spacing 1/4.
            const int band = 4 * k;
            for (int j = 1; j < band; ++j) {
                const double xi = -static_cast<double>(k) * j / band;
                if (xi < scan.front() || xi > scan.back()) continue;
                const double g = gain_at(xi);
                if (g > b.gain) {
                    b.gain = g;
                    b.xi = xi;
                    lo = xi - 0.25;
                    hi = xi + 0.25;
                }
            }
            lo = std::max(lo, scan.front());
            hi = std::min(hi, scan.back());
            const auto [xi_star, g_star] = golden_maximize(gain_at, lo, hi, 1e-6 * (1.0 + std::abs(b.xi)));
            if (g_star > b.gain) {
                b.gain = g_star;
                b.xi = xi_star;
            }
        });

        std::size_t failed = 0;
        for (std::size_t m = 0; m < modes; ++m) {
            const ModeBest& b = best[m];
            row.points_evaluated += b.evaluated;
            failed += b.failed;
            if (b.failed > 0) row.failures.push_back({static_cast<int>(m), 0.0, b.error});
            row.lattice_sup = std::max(row.lattice_sup, b.lattice_gain);
            if (b.gain > row.sup_norm) {
                row.sup_norm = b.gain;
                // a maximizer found only on the mirrored lattice belongs to mode -k
                const bool mirrored = !in_lattice(b.xi) && in_lattice(-b.xi);
                row.argmax_k = mirrored ? -static_cast<int>(m) : static_cast<int>(m);
                row.argmax_xi = mirrored ? -b.xi : b.xi;
            }
        }
        row.truncation_warning = std::abs(row.argmax_k) == row.k_max;
        check_failures(reynolds, failed, row.points_evaluated);

        // Spot checks on and beyond the analytic-bound circle, Re s >= 0.
        std::vector<cplx> spots;
        for (const double factor_r : options.spot_radii) {
            for (const double angle : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
                spots.push_back(std::polar(factor_r * radius, angle * std::numbers::pi));
            }
        }
        std::vector<double> spot_gain(spots.size() * modes, 0.0);
        parallel_for(spot_gain.size(), [&](std::size_t i) {
            const cplx s = spots[i / modes];
            const int k = static_cast<int>(i % modes);
            // the angle set is closed under conjugation, and gain(-k, s) == gain(k, conj s)
            spot_gain[i] = mode_gain({k, cplx{std::max(0.0, s.real()), s.imag()}, reynolds}, grid).gain;
        });
        for (std::size_t p = 0; p < spots.size(); ++p) {
            double g = 0.0;
            for (std::size_t m = 0; m < modes; ++m) g = std::max(g, spot_gain[p * modes + m]);
            const auto bound = theorem1_bound(spots[p], reynolds);
            row.theorem_region_sup = std::max(row.theorem_region_sup, g);
            if (bound) {
                const double ratio = g * g / *bound;
                row.theorem_region_max_ratio = std::max(row.theorem_region_max_ratio, ratio);
                if (ratio > 1.0 + kBoundSlack) row.theorem_region_ok = false;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace couette
